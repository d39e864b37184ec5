"""Hand-built constructions shared between unit and acceptance tests."""

import numpy as np

from algoselect.greedy import MwisInstance

# Geometric attribute palettes: every score-crossing point then lies on a
# small lattice { j*ln(phi) / ln(a/b) } whose minimum gap is bounded well away
# from zero (~7e-4 for these choices), so fine-grid oracles stay tractable.
MWIS_WEIGHT_PALETTE = 1.17 ** -np.arange(12, dtype=float)
KNAPSACK_VALUE_PALETTE = 1.27 ** np.arange(1, 11, dtype=float)
KNAPSACK_SIZE_PALETTE = np.arange(1.0, 9.0)


def lattice_min_gap(ratio_logs, denom_logs, lo, hi, boundary_margin=1e-6):
    """Minimum spacing of the crossing-point lattice inside (lo, hi).

    Brute-force enumeration over all admissible (numerator, denominator)
    log pairs; used to certify that grid oracles resolve every subinterval.
    """
    roots = []
    for rl in ratio_logs:
        for dl in denom_logs:
            if dl == 0.0:
                continue
            r = rl / dl
            if lo + boundary_margin < r < hi - boundary_margin:
                roots.append(r)
    pts = np.unique(np.asarray(roots))
    merged = [pts[0]]
    for p in pts[1:]:
        if p - merged[-1] > 1e-9:
            merged.append(p)
    grid = np.concatenate([[lo], np.asarray(merged), [hi]])
    return float(np.diff(grid).min())


def mwis_palette_min_gap(max_degree_plus_one=8):
    logs = [j * np.log(1.17) for j in range(-11, 12) if j != 0]
    dlogs = [np.log(a) - np.log(b)
             for a in range(1, max_degree_plus_one + 1)
             for b in range(1, max_degree_plus_one + 1) if a != b]
    return lattice_min_gap(logs, dlogs, 0.0, 1.0)


def knapsack_palette_min_gap(lo=0.0, hi=2.0):
    logs = [j * np.log(1.27) for j in range(-9, 10) if j != 0]
    dlogs = [np.log(a) - np.log(b) for a in range(1, 9) for b in range(1, 9) if a != b]
    return lattice_min_gap(logs, dlogs, lo, hi)


def interval_gadget(rho_low: float, rho_high_b_vs_c: float) -> MwisInstance:
    """Six-vertex graph whose greedy value is high exactly on a parameter window.

    Vertex 0 ("hub") is adjacent to vertices 1..3 ("mid" layer); vertex 4
    blocks mids 1 and 2; vertex 5 blocks mid 3.  Weights are tuned so the hub
    outranks the mids below `rho_low` and vertex 5 outranks the mids above
    `rho_high_b_vs_c`; in between, the three mids (joint weight 1.5) are all
    selected.
    """
    w_mid, w_out = 0.5, 0.25 if rho_high_b_vs_c > 1 else 0.5 / 1.5**rho_high_b_vs_c
    w_hub = w_mid * (4.0 / 3.0) ** rho_low
    edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 5)]
    return MwisInstance(6, edges, [w_hub, w_mid, w_mid, w_mid, w_out, w_out])


def crafted_shatter_pair():
    """Two 6-vertex MWIS instances realizing all four high/low cost patterns.

    The first instance's value steps up at rho = 0.5 and stays high through 1;
    the second is high only on (0.2, 0.7).  Probing parameters in the four
    regions (0, 0.2), (0.2, 0.5), (0.5, 0.7), (0.7, 1) therefore yields every
    one of the 2^2 labelings for suitable witnesses.
    """
    first = interval_gadget(0.5, 1.7)
    second = interval_gadget(0.2, 0.7)
    return first, second
