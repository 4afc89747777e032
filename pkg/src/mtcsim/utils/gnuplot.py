"""
Gnuplot script emitter for P-T and step-response plots.

Scripts reference the CSV artifacts next to them; plotting itself is left
to the user (`gnuplot sweep.gp`).
"""

from pathlib import Path

from ..errors import ArtifactIOError


def _write(path: Path, lines: list[str]) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}") from e
    return path


def pt_script(csv_name: str, fit: dict | None = None, output: str = "pt.png") -> list[str]:
    """P-T samples (mW on the x axis) with the quadratic fit overlaid."""
    lines = [
        "set datafile separator ','",
        "set key top left",
        "set grid",
        "set xlabel 'P (mW)'",
        "set ylabel 'T (K)'",
        "set terminal pngcairo size 800,600",
        f"set output '{output}'",
    ]
    plot = f"plot '{csv_name}' skip 1 using ($1*1e3):2 with points pt 7 title 'simulated'"
    if fit:
        lines.append(
            f"f(P) = {fit['c0_K']!r} + {fit['c1_K_per_mW']!r}*P + {fit['c2_K_per_mW2']!r}*P**2"
        )
        plot += ", f(x) with lines lw 2 title 'quadratic fit'"
    lines.append(plot)
    return lines


def trace_script(csv_name: str, probes: list[str], output: str = "transient.png") -> list[str]:
    """Probe temperatures versus time (ms)."""
    lines = [
        "set datafile separator ','",
        "set key bottom right",
        "set grid",
        "set xlabel 't (ms)'",
        "set ylabel 'T (K)'",
        "set terminal pngcairo size 800,600",
        f"set output '{output}'",
    ]
    curves = [
        f"'{csv_name}' skip 1 using ($1*1e3):{column} with lines lw 2 title '{name}'"
        for column, name in enumerate(probes, start=2)
    ]
    lines.append("plot " + ", \\\n     ".join(curves))
    return lines


def write_pt_script(path: str | Path, csv_name: str, fit: dict | None = None) -> Path:
    path = Path(path)
    return _write(path, pt_script(csv_name, fit, output=path.with_suffix(".png").name))


def write_trace_script(path: str | Path, csv_name: str, probes: list[str]) -> Path:
    path = Path(path)
    return _write(path, trace_script(csv_name, probes, output=path.with_suffix(".png").name))
