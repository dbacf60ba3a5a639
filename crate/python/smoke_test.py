"""End-to-end smoke test of the qfock_py bindings.

Run after `pip install -e . --no-build-isolation`:

    python3 python/smoke_test.py
"""

import sys
from fractions import Fraction

import qfock_py as q


def check(label, ok):
    mark = "✓" if ok else "✗"
    print(f"{mark} {label}")
    if not ok:
        sys.exit(1)


def main():
    # Lattice algebra: (1/2)Z + (1/3)Z = (1/6)Z, and duality squares to one.
    half = q.Lattice.from_rows([["1/2"]])
    third = q.Lattice.from_rows([["1/3"]])
    sixth = half.sum(third)
    check("lattice sum", sixth == q.Lattice.from_rows([["1/6"]]))
    check("lattice meet", half.intersect(third) == q.Lattice.standard(1))
    check("dual of dual", sixth.dual().dual() == sixth)
    check("index [(1/6)Z : Z] = 6", sixth.index_over(q.Lattice.standard(1)) == "6")

    # The transform of a lattice indicator is the measure times the dual
    # indicator; on the vacuum it is the identity.
    vac = q.MElement.vacuum(2)
    check("vacuum is fixed by its transform", q.apply(q.Sp.j(2), vac) == vac)
    l = q.random_lattice(2, seed=12, max_den=5)
    f = q.MElement.indicator(l, ["0", "0"])
    ff = q.apply(q.Sp.j(2), f)
    dual_ind = q.MElement.indicator(l.dual(), ["0", "0"])
    # Compare by pairing: ⟨Ff, I(L°)⟩ = μ(L)·⟨I(L°), I(L°)⟩.
    lhs = ff.pairing(dual_ind)
    rhs = float(Fraction(l.mu())) * dual_ind.pairing(dual_ind)
    check("summation formula (paired form)", abs(lhs - rhs) < 1e-12)

    # Double transform is parity, exactly.
    g = q.random_melement(2, seed=3)
    check("double transform is parity", q.apply(q.Sp.j(2), q.apply(q.Sp.j(2), g)) == q.parity(g))

    # Heisenberg covariance on sampled data.
    s = q.random_symplectic(1, seed=8, max_den=6)
    h = q.random_heis(1, seed=9)
    v = q.random_melement(1, seed=10)
    check("covariance identity", q.covariance_check(s, h, v))

    # Heisenberg action is a representation.
    h2 = q.random_heis(1, seed=11)
    check(
        "twisted translations compose",
        h.act(h2.act(v)) == h.mul(h2).act(v),
    )

    # Congruence families: J is in the theta group, not in Γ₂.
    check("J in the theta group", q.member(q.Sp.j(1), "gamma12"))
    check("J not congruent to 1 mod 2", not q.member(q.Sp.j(1), "principal", level=2))

    # Normalized operators fix the vacuum.
    (gen,) = q.generators("gamma12", n=1, count=1, seed=4)
    check("normalized operator fixes the vacuum", q.normalized_apply(gen, q.MElement.vacuum(1)) == q.MElement.vacuum(1))

    # Stabilizer level of the half-shifted indicator.
    shifted = q.MElement.indicator(q.Lattice.standard(1), ["1/2"])
    rep = q.stabilizer(shifted, trials=6, seed=5)
    check("level 2, modulus 8", rep["level"] == "2" and rep["modulus"] == "8")
    check("level group fixes the element", rep["all_fixed"])

    # Theta: the classical value at z = i, and modularity under J.
    theta_i = q.theta(q.MElement.vacuum(1), 1.0)
    check("theta at i", abs(theta_i - 1.0864348112133080145) < 1e-10)
    mod = q.modularity(q.MElement.vacuum(1))
    check("theta modularity under J", mod["pass"] and mod["normalized_is_one"])

    # A verification suite through the bindings.
    report = q.run_suite("poisson", trials=4, seed=7)
    check("poisson suite 4/4", report["passes"] == 4 and not report["failures"])

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
