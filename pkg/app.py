import streamlit as st
import pandas as pd
import os
import glob

from concept_stlc.config import BENCHMARK_SIZES, DEFAULT_FUEL, SAMPLES_DIR
from concept_stlc.benchmark import growth_ratios, run_benchmark
from concept_stlc.evaluator import Converged, OutOfFuel, Stuck, trace
from concept_stlc.modcheck import CheckError
from concept_stlc.plots import plot_checker_scaling
from concept_stlc.report import diagnostics_frame, trace_frame
from concept_stlc.soundness import check_trace_soundness
from concept_stlc.syntax import ParseError, parse, pretty, pretty_term, pretty_type
from concept_stlc.typecheck import check_program

# Spiegazioni dei codici di diagnostica mostrate accanto alla tabella degli errori
DIAGNOSTIC_EXPLANATIONS = {
    "duplicate-name": "Lo stesso nome è dichiarato più volte nella stessa sezione o nello stesso concept/model.",
    "decl-ill-formed": "Il tipo di un membro di concept nomina un concept non definito prima.",
    "missing-member": "Il model non implementa un membro richiesto dal suo concept.",
    "extra-member": "Il model definisce un membro che il concept non dichiara.",
    "member-type-mismatch": "Un termine non ha il tipo atteso (membro, argomento, condizione, model di un altro concept).",
    "unbound-reference": "Variabile, concept, model o membro non definito.",
}


def _sample_files():
    return sorted(glob.glob(os.path.join(SAMPLES_DIR, "*.cstlc")))


st.set_page_config(page_title="concept-STLC Playground", page_icon="🧩", layout="wide")
st.title("🧩 concept-STLC Playground")
st.markdown("Controlla ed esegue un programma STLC con **concept** e **model**: un programma per esecuzione.")

with st.sidebar:
    st.header("Programma")
    samples = _sample_files()
    sample_names = [os.path.basename(path) for path in samples]
    chosen = st.selectbox("Programma di esempio", ["(nessuno)"] + sample_names)
    uploaded_file = st.file_uploader("Oppure carica un file .cstlc", type=["cstlc", "txt"])
    fuel = st.slider("Budget di passi (fuel)", min_value=0, max_value=DEFAULT_FUEL, value=1_000, step=100)

initial_source = ""
if uploaded_file is not None:
    try:
        initial_source = uploaded_file.getvalue().decode("utf-8")
    except UnicodeDecodeError as e:
        st.error(f"Il file {uploaded_file.name} non è testo UTF-8: {e}")
elif chosen != "(nessuno)":
    with open(samples[sample_names.index(chosen)], encoding="utf-8") as fh:
        initial_source = fh.read()

source = st.text_area("Sorgente", value=initial_source, height=300, key=f"source_{chosen}_{getattr(uploaded_file, 'name', '')}")

tab_check, tab_benchmark = st.tabs(["Controllo ed esecuzione", "Benchmark del checker"])

with tab_check:
    if not source.strip():
        st.info("Scegli un esempio, carica un file o scrivi un programma.")
    else:
        program = None
        try:
            program = parse(source)
        except ParseError as e:
            st.error(f"Errore di sintassi alla riga {e.line}, colonna {e.column}: {e.message}")
            if e.expected:
                st.caption("Token attesi: " + ", ".join(sorted(e.expected)))

        if program is not None:
            with st.expander("Programma normalizzato"):
                st.code(pretty(program))
            try:
                checked = check_program(program)
            except CheckError as e:
                st.error("Il programma non è ben tipato.")
                frame = diagnostics_frame(e.outcome)
                st.dataframe(frame, width='stretch')
                for code in pd.unique(frame["code"]):
                    st.caption(f"**{code}**: {DIAGNOSTIC_EXPLANATIONS.get(code, '')}")
            else:
                st.success(f"Tipo del termine principale: `{pretty_type(checked.main_type)}`")
                report = check_trace_soundness(checked, program.main, fuel)
                result = report.result
                col1, col2 = st.columns(2)
                col1.metric("Passi", report.steps)
                if isinstance(result, Converged):
                    col2.metric("Valore", pretty_term(result.value))
                elif isinstance(result, Stuck):
                    col2.metric("Esito", "bloccato")
                elif isinstance(result, OutOfFuel):
                    col2.metric("Esito", "fuel esaurito")

                if report.sound:
                    st.caption("Ogni termine della traccia ha il tipo del termine principale.")
                else:
                    st.warning(f"{len(report.violations)} violazioni di progress/preservation.")
                    st.dataframe(pd.DataFrame([v.__dict__ for v in report.violations]), width='stretch')

                st.subheader("Traccia di valutazione")
                st.dataframe(trace_frame(checked.ct, checked.mt, trace(checked.mt, program.main, fuel)), width='stretch')

with tab_benchmark:
    st.markdown("Tempo di controllo di un concept sintetico con molti membri: controllo efficiente contro l'oracolo a liste.")
    include_reference = st.checkbox("Includi l'oracolo a liste (lento per molti membri)", value=False)
    max_members = st.slider("Membri massimi", min_value=BENCHMARK_SIZES["small"], max_value=BENCHMARK_SIZES["large"],
                            value=BENCHMARK_SIZES["small"] * 5, step=BENCHMARK_SIZES["small"])
    if st.button("Esegui benchmark"):
        sizes = sorted({BENCHMARK_SIZES["small"], max_members // 2, max_members})
        with st.spinner("Misurazione in corso..."):
            frame = run_benchmark(sizes, include_reference=include_reference)
        st.dataframe(frame, width='stretch')
        st.plotly_chart(plot_checker_scaling(frame), width='stretch')
        if len(frame) >= 2:
            st.json(growth_ratios(frame))
