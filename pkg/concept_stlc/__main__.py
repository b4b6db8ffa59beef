from concept_stlc.cli import main

main()
