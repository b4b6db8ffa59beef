# concept_stlc package
