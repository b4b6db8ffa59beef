# concept_stlc/plots.py

import pandas as pd
import plotly.graph_objects as go


def plot_checker_scaling(frame: pd.DataFrame) -> go.Figure:
    """
    Tempo di controllo in funzione del numero di membri, su assi logaritmici:
    controllo efficiente e, se misurata, pipeline di riferimento.
    """
    if frame is None or frame.empty:
        return go.Figure().update_layout(title="Nessun dato disponibile per il benchmark")

    fig = go.Figure()
    fig.add_trace(go.Scatter(
        x=frame["members"],
        y=frame["efficient_s"],
        mode="lines+markers",
        name="Controllo efficiente",
        line=dict(color="#1f77b4", width=2)
    ))
    if "reference_s" in frame and frame["reference_s"].notna().all():
        fig.add_trace(go.Scatter(
            x=frame["members"],
            y=frame["reference_s"],
            mode="lines+markers",
            name="Oracolo a liste",
            line=dict(color="#ff7f0e", width=2, dash="dash")
        ))

    fig.update_layout(
        title="Scalabilità del controllo di un concept",
        xaxis_title="Membri",
        yaxis_title="Tempo (s)",
        xaxis_type="log",
        yaxis_type="log",
        hovermode="x unified",
        template="plotly_white",
        height=500
    )
    return fig
