import math

import numpy as np
import pytest

from ocs.barriers import DoubleRectangular, Rectangular
from ocs.constants import electron_constants
from ocs.sweeps import TABLE_COLUMNS, double_sweep, hartman_sweep, log_slope, times_table
from ocs.timescales import dwell_buttiker, phase_time

C = electron_constants()
K = float(C.wavenumber(0.05))
KAPPA = float(C.kappa(0.2, 0.05))


def test_log_slope_recovers_exponent():
    d = np.linspace(1, 5, 9)
    assert log_slope(d, 3.0 * np.exp(1.7 * d)) == pytest.approx(1.7, rel=1e-12)


def test_times_table_complete_under_barrier():
    row = times_table(K, Rectangular(0.2, 200.0, 203.0))
    assert list(row) == list(TABLE_COLUMNS)
    assert row["notes"] == "" and row["larmor_reason"] == ""
    assert all(row[c] is not None for c in TABLE_COLUMNS if c.endswith("_fs"))
    assert abs(row["flip_chain"]) < 1e-6


def test_times_table_free_case_records_reasons():
    row = times_table(K, Rectangular(0.0, 200.0, 203.0))
    assert "dwell_ref:ZeroReflection" in row["notes"]
    assert "asymptotic:LambdaUndefined" in row["notes"]
    assert row["DwellRef_fs"] is None
    assert row["DwellFree_fs"] == pytest.approx(3.0 * C.m_over_hbar / K)


def test_times_table_double_barrier_skips_larmor():
    row = times_table(K, DoubleRectangular(0.3, 1.0, 2.0, 50.0))
    assert row["larmor_reason"] == "NotRectangular"
    assert row["LarmorPerp_fs"] is None and row["DwellTr_fs"] > 0


def test_hartman_sweep_rows_and_summary():
    d = [v / KAPPA for v in range(4, 17)]
    res = hartman_sweep(K, 0.2, d)
    assert res.summary["kappa_nm-1"] == pytest.approx(KAPPA, rel=1e-14)
    assert res.summary["log_slope_DwellTr"] == pytest.approx(KAPPA, rel=1e-2)
    assert res.summary["log_slope_DwellTotalFlux"] == pytest.approx(2 * KAPPA, rel=1e-2)
    assert res.summary["saturation_delta_PhaseWigner_fs"] < 1e-9
    assert res.summary["saturation_delta_LarmorPerp_fs"] < 1e-9
    spec = Rectangular(0.2, 200.0, 200.0 + d[3])
    assert res.rows[3]["PhaseWigner_fs"] == phase_time(K, spec)[0].value
    assert res.rows[3]["LarmorPerp_fs"] == dwell_buttiker(K, spec).value
    assert np.allclose(res.column("d_nm"), d)


def test_parallel_sweep_equals_serial():
    ls = [0.3, 1.1, 2.0, 3.4]
    serial = double_sweep(K, 50.0, 0.5, ls)
    parallel = double_sweep(K, 50.0, 0.5, ls, workers=2)
    assert serial.rows == parallel.rows
    assert serial.summary["tau_gap_increasing"] is True
    assert serial.summary["max_additivity_residual"] < 1e-9
    assert serial.summary["kappa0_d"] == pytest.approx(math.sqrt(50.0 / C.hbar2_over_2m) * 0.5)
