"""
Formatting utilities for reports.
"""


def format_duration(seconds: float) -> str:
    """
    Format a duration with an engineering prefix.

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted string like "1.44 ms" or "20 us"
    """
    magnitude = abs(seconds)
    if magnitude == 0:
        return "0 s"
    if magnitude >= 1:
        return f"{seconds:.4g} s"
    if magnitude >= 1e-3:
        return f"{seconds * 1e3:.4g} ms"
    if magnitude >= 1e-6:
        return f"{seconds * 1e6:.4g} us"
    return f"{seconds * 1e9:.4g} ns"


def format_power(watts: float) -> str:
    """Format a power: "20 mW", "1.5 W", "250 uW"."""
    magnitude = abs(watts)
    if magnitude == 0:
        return "0 W"
    if magnitude >= 1:
        return f"{watts:.4g} W"
    if magnitude >= 1e-3:
        return f"{watts * 1e3:.4g} mW"
    return f"{watts * 1e6:.4g} uW"


def format_length(meters: float) -> str:
    if abs(meters) >= 1e-3:
        return f"{meters * 1e3:.4g} mm"
    if abs(meters) >= 1e-6 or meters == 0:
        return f"{meters * 1e6:.4g} um"
    return f"{meters * 1e9:.4g} nm"


def format_temperature(kelvin: float, ambient: float | None = None) -> str:
    """Format a temperature, optionally with its rise over ambient."""
    text = f"{kelvin:.2f} K"
    if ambient is not None:
        text += f" (+{kelvin - ambient:.2f} K)"
    return text


def build_fit_text(fit: dict) -> str:
    """One-line quadratic fit as printed in reports."""
    return (
        f"T = {fit['c0_K']:.5g} + {fit['c1_K_per_mW']:.5g} P + "
        f"{fit['c2_K_per_mW2']:.5g} P^2   (P in mW, rms {fit['residual_rms_K']:.3g} K)"
    )


def build_report_text(report: dict) -> str:
    """
    Human-readable audit report.

    Args:
        report: Dict from the report command

    Returns:
        Multi-line text
    """
    lines = [f"# mtcsim report ({report.get('scenario_hash') or 'imported'})", ""]

    fit = report.get("fit")
    if fit:
        lines.append("## P-T characteristic")
        lines.append(build_fit_text(fit))
        for row in report.get("thermal_resistance", []):
            lines.append(f"R_th({row['P_mW']:g} mW) = {row['R_th_K_per_mW']:.4g} K/mW")
        lines.append("")

    audit = report.get("operating_point")
    if audit:
        lines.append("## Operating point")
        lines.append(
            f"T({audit['power_mW']:g} mW) = {format_temperature(audit['T_K'])}; target "
            f"{audit['target_K']:g} K {'reached' if audit['reached'] else 'NOT reached'}"
        )
        for row in audit.get("power_for_target", []):
            if row.get("P_mW") is None:
                lines.append(f"{row['T_K']:g} K: unreachable")
            else:
                lines.append(f"{row['T_K']:g} K needs {format_power(row['P_mW'] * 1e-3)}")
        lines.append("")

    taus = report.get("time_constants")
    if taus:
        lines.append("## Thermal time constants")
        for tau in taus:
            if tau.get("status") != "ok":
                lines.append(f"{tau['probe']}: {tau.get('status')} ({tau.get('reason', '')})")
                continue
            fitted = tau.get("tau_exponential_fit_s")
            fitted_text = format_duration(fitted) if fitted is not None else "n/a"
            lines.append(
                f"{tau['probe']}: tau = {format_duration(tau['tau_crossing_s'])} "
                f"(63.2 % crossing), {fitted_text} (exponential fit)"
            )
        lines.append("")

    return "\n".join(lines).rstrip() + "\n"
