"""Independent brute-force reference implementations used as test oracles.

Everything here works by explicit scalar loops and flat-index arithmetic so
that it shares no code path with the package implementation it checks.
"""

import numpy as np


def partial_trace_pure_loops(amplitudes, dims, keep_labels):
    """Reduced density matrix of a pure state by direct summation.

    ``dims`` is (d_a, d_b, d_c); ``keep_labels`` a subset of "ABC" in order.
    Index (i, j, k) maps to (i * d_b + j) * d_c + k, matching the package
    convention, but the summation below is written from scratch.
    """
    d = dict(zip("ABC", dims))
    keep = [lab for lab in "ABC" if lab in keep_labels]
    traced = [lab for lab in "ABC" if lab not in keep]
    keep_dim = int(np.prod([d[lab] for lab in keep]))
    out = np.zeros((keep_dim, keep_dim), dtype=complex)

    def flat(idx):
        return (idx["A"] * d["B"] + idx["B"]) * d["C"] + idx["C"]

    def kept_flat(idx):
        val = 0
        for lab in keep:
            val = val * d[lab] + idx[lab]
        return val

    ranges = {lab: range(d[lab]) for lab in "ABC"}
    for ka in ranges["A"]:
        for kb in ranges["B"]:
            for kc in ranges["C"]:
                for la in ranges["A"]:
                    for lb in ranges["B"]:
                        for lc in ranges["C"]:
                            row = {"A": ka, "B": kb, "C": kc}
                            col = {"A": la, "B": lb, "C": lc}
                            if any(row[lab] != col[lab] for lab in traced):
                                continue
                            out[kept_flat(row), kept_flat(col)] += (
                                amplitudes[flat(row)] * np.conj(amplitudes[flat(col)])
                            )
    return out


def bc_overlaps_loops(bc_vectors, b_vectors, c_vectors, d_b, d_c):
    """Overlap tensor <j k | i;BC> by scalar loops.

    ``bc_vectors`` has columns of length d_b * d_c (index b * d_c + c),
    ``b_vectors`` / ``c_vectors`` columns of length d_b / d_c.
    """
    r_bc = bc_vectors.shape[1]
    r_b = b_vectors.shape[1]
    r_c = c_vectors.shape[1]
    out = np.zeros((r_bc, r_b, r_c), dtype=complex)
    for i in range(r_bc):
        for j in range(r_b):
            for k in range(r_c):
                acc = 0.0 + 0.0j
                for b in range(d_b):
                    for c in range(d_c):
                        acc += (
                            np.conj(b_vectors[b, j])
                            * np.conj(c_vectors[c, k])
                            * bc_vectors[b * d_c + c, i]
                        )
                out[i, j, k] = acc
    return out


def ab_overlaps_loops(ab_vectors, a_vectors, b_vectors, d_a, d_b):
    """Overlap tensor <i j | k;AB> by scalar loops."""
    r_ab = ab_vectors.shape[1]
    r_a = a_vectors.shape[1]
    r_b = b_vectors.shape[1]
    out = np.zeros((r_ab, r_a, r_b), dtype=complex)
    for k in range(r_ab):
        for i in range(r_a):
            for j in range(r_b):
                acc = 0.0 + 0.0j
                for a in range(d_a):
                    for b in range(d_b):
                        acc += (
                            np.conj(a_vectors[a, i])
                            * np.conj(b_vectors[b, j])
                            * ab_vectors[a * d_b + b, k]
                        )
                out[k, i, j] = acc
    return out


def phase_edges_loops(bc_overlaps, ab_overlaps):
    """Edge-weight array by scalar loops over the shared B index."""
    r_a = ab_overlaps.shape[1]
    r_b = ab_overlaps.shape[2]
    r_c = ab_overlaps.shape[0]
    out = np.zeros((r_a, r_c), dtype=complex)
    for i in range(r_a):
        for k in range(r_c):
            acc = 0.0 + 0.0j
            for j in range(r_b):
                acc += np.conj(bc_overlaps[i, j, k]) * ab_overlaps[k, i, j]
            out[i, k] = acc
    return out


def planar_density_loops(values, shape, spacings, plane):
    """Planar projection by scalar loops, trace-normalized."""
    n_x, n_y, n_z = shape
    h_x, h_y, h_z = spacings

    def flat(ix, iy, iz):
        return (ix * n_y + iy) * n_z + iz

    if plane == "XY":
        n = n_x * n_y
        out = np.zeros((n, n), dtype=complex)
        for ix in range(n_x):
            for iy in range(n_y):
                for jx in range(n_x):
                    for jy in range(n_y):
                        acc = 0.0 + 0.0j
                        for iz in range(n_z):
                            acc += values[flat(ix, iy, iz)] * np.conj(
                                values[flat(jx, jy, iz)]
                            )
                        out[ix * n_y + iy, jx * n_y + jy] = acc * h_z
    elif plane == "YZ":
        n = n_y * n_z
        out = np.zeros((n, n), dtype=complex)
        for iy in range(n_y):
            for iz in range(n_z):
                for jy in range(n_y):
                    for jz in range(n_z):
                        acc = 0.0 + 0.0j
                        for ix in range(n_x):
                            acc += values[flat(ix, iy, iz)] * np.conj(
                                values[flat(ix, jy, jz)]
                            )
                        out[iy * n_z + iz, jy * n_z + jz] = acc * h_x
    else:
        raise ValueError(plane)
    return out / np.trace(out).real


def haar_unitary(dim, rng):
    """Haar-distributed unitary via QR with phase-fixed diagonal."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
