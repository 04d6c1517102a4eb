"""Smoke test for the chancomp Python extension.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`
or `pip install` of a wheel from `maturin build -m crates/python/Cargo.toml`.
"""

import math

import chancomp


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    ident = chancomp.identity(2)
    assert (ident.d_in, ident.d_out, len(ident)) == (2, 2, 1)
    assert ident.is_trace_preserving()
    assert chancomp.complement(ident).d_out == 1

    wh = chancomp.transpose_depolarizing(3)
    assert len(wh) == 3 and wh.is_trace_preserving()
    w = chancomp.complements_witness(wh.complement(), chancomp.wh_complement(3))
    assert w["passes"], w

    phi = chancomp.random_channel(2, 2, 3, seed=7)
    comp = phi.complement()
    rho = [[0.5 + 0j, 0.5 + 0j], [0.5 + 0j, 0.5 + 0j]]
    assert close(sum(phi.apply(rho)[i][i].real for i in range(2)), 1.0, 1e-12)
    assert close(sum(comp.apply(rho)[i][i].real for i in range(comp.d_out)), 1.0, 1e-12)

    again = chancomp.KrausMap.from_json(phi.to_json())
    assert chancomp.equivalence_witness(phi, again)["passes"]
    assert phi.minimal_form().choi_rank() == len(phi.minimal_form())

    a = chancomp.nu_p(phi, 2.0, restarts=10, seed=1)
    b = chancomp.nu_p(comp, 2.0, restarts=10, seed=1)
    assert close(a["value"], b["value"], 1e-6), (a["value"], b["value"])
    assert len(a["argmax"]["state"]) == 2

    inf = chancomp.nu_p(phi, "inf", restarts=10)
    assert inf["p"] == "inf" and 0.5 <= inf["value"] <= 1.0

    e1 = chancomp.min_output_entropy(phi, restarts=10)["value"]
    e2 = chancomp.min_output_entropy(comp, restarts=10)["value"]
    assert close(e1, e2, 1e-6), (e1, e2)

    hh = chancomp.h_hat(phi, [[0.7 + 0j, 0j], [0j, 0.3 + 0j]], restarts=5)
    assert hh["kind"] == "h_hat" and hh["value"] >= 0.0

    gap = chancomp.additivity_gap(chancomp.random_eb_channel(2, 2, 3, seed=2), phi, restarts=5)
    assert abs(gap["gap"]) < 1e-4, gap

    ratio = chancomp.wh_violation_witness(4, 30)["ratio"]
    assert ratio > 1.0, ratio
    assert chancomp.wh_violation_witness(3, 2)["ratio"] <= 1.0 + 1e-12

    g = chancomp.gaussian_complement(0.6)
    assert g["kind"] == "attenuation" and close(g["coeff"], 0.8, 1e-12)
    g = chancomp.gaussian_complement(math.sqrt(2))
    assert g["kind"] == "conjugate_amplifier"

    try:
        chancomp.depolarizing(2, 2.0)
    except ValueError:
        pass
    else:
        raise AssertionError("depolarizing(2, 2.0) should be rejected")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
