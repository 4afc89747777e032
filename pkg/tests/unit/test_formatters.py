"""Unit tests for formatting utilities."""

import pytest

from mtcsim.utils.formatters import (
    build_fit_text,
    build_report_text,
    format_duration,
    format_length,
    format_power,
    format_temperature,
)


@pytest.mark.unit
class TestFormatDuration:
    """Test format_duration function."""

    def test_format_duration_milliseconds(self):
        """Test formatting millisecond time constants."""
        assert format_duration(1.44e-3) == "1.44 ms"
        assert format_duration(10e-3) == "10 ms"

    def test_format_duration_microseconds(self):
        """Test formatting microsecond time steps."""
        assert format_duration(20e-6) == "20 us"

    def test_format_duration_other_ranges(self):
        assert format_duration(2.5) == "2.5 s"
        assert format_duration(5e-9) == "5 ns"

    def test_format_duration_zero(self):
        """Test formatting zero duration."""
        assert format_duration(0) == "0 s"


@pytest.mark.unit
class TestFormatQuantities:
    """Test power, length and temperature formatting."""

    def test_format_power(self):
        assert format_power(20e-3) == "20 mW"
        assert format_power(1.5) == "1.5 W"
        assert format_power(250e-6) == "250 uW"
        assert format_power(0) == "0 W"

    def test_format_length(self):
        assert format_length(150e-6) == "150 um"
        assert format_length(100e-9) == "100 nm"
        assert format_length(2e-3) == "2 mm"

    def test_format_temperature(self):
        """Test temperature with and without the rise over ambient."""
        assert format_temperature(615.97) == "615.97 K"
        assert format_temperature(615.97, 300.0) == "615.97 K (+315.97 K)"


@pytest.mark.unit
class TestReportText:
    """Test report text generation."""

    @pytest.fixture
    def fit(self):
        return {
            "c0_K": 305.23,
            "c1_K_per_mW": 10.297,
            "c2_K_per_mW2": 0.262,
            "residual_rms_K": 0.0,
        }

    def test_build_fit_text(self, fit):
        text = build_fit_text(fit)
        assert text.startswith("T = 305.23 + 10.297 P + 0.262 P^2")
        assert "P in mW" in text

    def test_build_report_text_sections(self, fit):
        """Test that every populated section is printed."""
        report = {
            "scenario_hash": "abc123",
            "fit": fit,
            "thermal_resistance": [{"P_mW": 20.0, "R_th_K_per_mW": 20.777}],
            "operating_point": {
                "power_mW": 20.0,
                "T_K": 615.97,
                "target_K": 600.0,
                "reached": True,
                "power_for_target": [
                    {"T_K": 600.0, "P_mW": 19.2238},
                    {"T_K": 2000.0, "P_mW": None},
                ],
            },
            "time_constants": [
                {"probe": "sensor", "status": "ok", "tau_crossing_s": 1.44e-3,
                 "tau_exponential_fit_s": 1.5e-3},
                {"probe": "heater_max", "status": "unsettled", "reason": "trace shows no rise"},
            ],
        }
        text = build_report_text(report)

        assert text.startswith("# mtcsim report (abc123)")
        assert "R_th(20 mW) = 20.78 K/mW" in text
        assert "T(20 mW) = 615.97 K; target 600 K reached" in text
        assert "600 K needs 19.22 mW" in text
        assert "2000 K: unreachable" in text
        assert "sensor: tau = 1.44 ms (63.2 % crossing), 1.5 ms (exponential fit)" in text
        assert "heater_max: unsettled" in text
        assert text.endswith("\n")

    def test_build_report_text_empty(self):
        """Test that an empty report only prints the title."""
        assert build_report_text({}) == "# mtcsim report (imported)\n"

    def test_missing_exponential_fit(self):
        report = {"time_constants": [
            {"probe": "sensor", "status": "ok", "tau_crossing_s": 2e-3,
             "tau_exponential_fit_s": None},
        ]}
        assert "n/a (exponential fit)" in build_report_text(report)
