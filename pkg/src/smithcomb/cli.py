"""Command-line entry point: ``smithcomb <subcommand> ...``.

Exit status: 0 on success, 1 when a requested check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from . import exactmat, gridpoly, jacobitrudi, jucysmurphy, randomsnf, sandpile, symfunc, varchenko
from .errors import SmithCombError
from .rings import UniPoly, cyclotomic_factor, format_cyclotomic, multipoly_ring
from .symfunc import Partition


class CheckFailed(Exception):
    pass


class _Out:
    """Collects the report; prints text or JSON at the end."""

    def __init__(self, args):
        self.json = args.json
        self.lines: List[str] = []
        self.data = {}

    def line(self, s=""):
        self.lines.append(str(s))

    def emit(self, path: Optional[str]):
        if self.json:
            text = json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        else:
            text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if path:
            Path(path).write_text(text)
        else:
            sys.stdout.write(text)


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _load_matrix(args):
    text = _read(args.file)
    if args.file.endswith(".json"):
        return exactmat.matrix_from_json(json.loads(text))
    return exactmat.matrix_from_text(text, exactmat.ring_from_name(args.ring))


def _shape(text: str) -> Partition:
    return Partition.parse(text)


def _fmt(ring, x) -> str:
    return ring.fmt(x) if hasattr(ring, "fmt") else str(x)


def _cyclo(p: UniPoly) -> str:
    mult, rest = cyclotomic_factor(p)
    if rest.degree > 0:
        return str(p)
    return format_cyclotomic(mult)


# ---------------------------------------------------------------------------
# subcommands

def cmd_snf(args, out):
    A = _load_matrix(args)
    res = exactmat.snf(A, want_transforms=args.transforms, budget_bits=args.budget_bits, strategy=args.strategy)
    out.data = res.to_json()
    out.line(" ".join(_fmt(A.ring, d) for d in res.diagonal))
    if args.transforms:
        out.line("P:")
        out.line(res.P.to_text())
        out.line("Q:")
        out.line(res.Q.to_text())


def cmd_minors(args, out):
    A = _load_matrix(args)
    res = exactmat.snf_via_minors(A)
    R = A.ring
    out.data = {"diagonal": [R.to_json(d) for d in res.diagonal],
                "minor_gcds": [R.to_json(g) for g in res.minor_gcds],
                "certified": res.certified}
    out.line(" ".join(_fmt(R, d) for d in res.diagonal))
    out.line("certified" if res.certified else "candidate only (ring is not a PID)")
    if args.refute_at is not None:
        v = exactmat.refute_snf_by_specialization(A, res.diagonal, args.refute_at)
        out.data["refutation"] = {"refuted": v.refuted, "point": v.point,
                                  "specialized": [str(x) for x in v.specialized_snf],
                                  "candidate": [str(x) for x in v.candidate_snf]}
        out.line(str(v))
    if args.candidate is not None:
        cand = [exactmat.parse_element(t, R) for t in args.candidate.split(",")]
        v = exactmat.refute_snf_by_specialization(A, cand, args.at)
        out.data["candidate_check"] = {"refuted": v.refuted, "specialized": [str(x) for x in v.specialized_snf],
                                       "candidate": [str(x) for x in v.candidate_snf]}
        out.line(str(v))


def cmd_cokernel(args, out):
    A = _load_matrix(args)
    g = exactmat.cokernel(A)
    out.data = g.to_json()
    out.line(str(g))


def _graph(args):
    if args.complete:
        return sandpile.MultiGraph.complete(args.complete), args.sink
    if not args.graph:
        raise SmithCombError("give --graph FILE or --complete N")
    G, sink = sandpile.graph_from_text(_read(args.graph))
    return G, (args.sink if args.sink is not None else sink)


def cmd_sandpile(args, out):
    G, sink = _graph(args)
    if args.action == "group":
        g = sandpile.critical_group(G, sink)
        out.data = {"factors": [str(f) for f in g.factors], "order": str(g.order)}
        out.line(str(g))
    elif args.action == "trees":
        t = sandpile.tree_count(G)
        out.data = {"trees": str(t)}
        out.line(t)
    elif args.action == "dynamic":
        d = sandpile.critical_group_dynamic(G, sink)
        a = sandpile.critical_group(G, sink)
        out.data = {"dynamic": [str(f) for f in d.factors], "algebraic": [str(f) for f in a.factors]}
        out.line(f"dynamic:   {' '.join(map(str, d.factors)) or '1'}")
        out.line(f"algebraic: {a}")
        if d.factors != a.factors:
            raise CheckFailed("dynamic and algebraic groups differ")
    else:
        if args.config is None:
            raise SmithCombError("--config is required")
        counts = [int(t) for t in args.config.replace(",", " ").split()]
        sigma = sandpile.ChipConfig.from_nonsink(G, counts, sink)
        if args.action == "stabilize":
            s, fired = sandpile.stabilize(sigma)
            out.data = {"stable": list(s.nonsink()), "topples": list(fired)}
            out.line(str(s))
            out.line("topples: " + " ".join(map(str, fired)))
        else:
            r = sandpile.is_recurrent(sigma)
            out.data = {"recurrent": r}
            out.line("recurrent" if r else "not recurrent")


def cmd_symfunc(args, out):
    if args.action == "psi":
        if args.k == 1:
            rep = symfunc.verify_thm_cai(args.n)
            predicted = rep.form_b
        else:
            rep = symfunc.verify_nie(args.n, args.k)
            predicted = rep.predicted
        out.data = {"n": args.n, "k": args.k, "snf": [str(x) for x in rep.computed],
                    "predicted": [str(x) for x in predicted], "det": str(rep.det), "ok": rep.ok}
        out.line(" ".join(map(str, rep.computed)))
        out.line(f"det {rep.det}; peeling rule {'matches' if rep.ok else 'DIFFERS'}")
        if not rep.ok:
            raise CheckFailed("psi SNF differs from the peeling rule")
    else:
        d, threes = symfunc.binomial_snf_stats(args.a, args.n)
        out.data = {"a": args.a, "n": args.n, "snf": [str(x) for x in d]}
        if threes is not None:
            out.data["count_of_3"] = threes
        out.line(" ".join(map(str, d)))


def cmd_jt(args, out):
    lam = _shape(args.shape)
    t = args.t if args.t is not None else len(lam)
    if args.q:
        rep = jacobitrudi.verify_thm_jtq(lam, t)
        out.data = {"snf": [str(x) for x in rep.computed], "predicted": [str(x) for x in rep.predicted], "ok": rep.ok}
        for x in rep.computed:
            out.line(x)
    else:
        rep = jacobitrudi.verify_thm_jt(lam, t)
        out.data = {"snf": [jacobitrudi.factored_linear(x) for x in rep.computed],
                    "predicted": [jacobitrudi.factored_linear(x) for x in rep.predicted],
                    "det_ratio": str(rep.det_ratio), "ok": rep.ok}
        out.line(" ".join(jacobitrudi.factored_linear(x) for x in rep.computed))
        out.line(f"hook-content product / det = {rep.det_ratio}")
    out.line("matches the diagonal-hook products" if rep.ok else "MISMATCH")
    if not rep.ok:
        raise CheckFailed("Jacobi-Trudi SNF mismatch")


def cmd_grid(args, out):
    lam = _shape(args.shape)
    if args.spec == "symbolic":
        aliases = gridpoly.FIG2_ALIASES if args.letters else None
        rep = gridpoly.verify_thm_bessen(lam, aliases=aliases)
        chain = rep.chain_computed
        out.data = {"det": str(rep.det), "expected_det": str(rep.det_expected),
                    "chain": [str(x) for x in chain] if chain is not None else None, "ok": rep.ok}
        out.line(f"det M(1,1) = {rep.det}")
        if chain is not None:
            out.line("minor-gcd chain: " + ", ".join(str(x) for x in chain))
        if not rep.ok:
            raise CheckFailed("det or chain differs from the diagonal products")
    else:
        g = gridpoly.specialize_grid(lam, args.spec)
        out.data = {"det": str(g.det), "snf": [str(x) for x in g.snf]}
        out.line(f"det = {g.det}")
        out.line("snf: " + " ".join(str(x) for x in g.snf))


def _arrangement(args):
    if args.fig3:
        return varchenko.FIG3
    if not args.file:
        raise SmithCombError("give --file FILE or --fig3")
    return varchenko.arrangement_from_text(_read(args.file))


def cmd_varchenko(args, out):
    A = _arrangement(args)
    regions = varchenko.enumerate_regions(A)
    out.data = {"regions": len(regions)}
    out.line(f"{len(regions)} regions")
    if args.symbolic or args.q:
        V = varchenko.varchenko_matrix(A, symbolic=args.symbolic, regions=regions)
        out.data["matrix"] = V.to_json()
        out.line(V.to_text())
    if args.check == "gz":
        diag = varchenko.gz_diagonal(A)
        rep = varchenko.verify_gz_by_specialization(A)
        out.data["gz_diagonal"] = [str(d) for d in diag]
        out.data["ok"] = rep.ok
        out.line("diagonal form: " + ", ".join(str(d) for d in diag))
        out.line("SNF of V_q: " + ", ".join(_cyclo(d) for d in rep.computed))
        if not rep.ok:
            raise CheckFailed("SNF of V_q differs from the specialized diagonal form")
    elif args.check == "dh":
        counts = varchenko.nd_counts(A)
        c = varchenko.char_coefficients(A)
        n1 = [counts.get((1, i), 0) for i in range(len(c))]
        n2 = [counts.get((2, i), 0) for i in range(len(c))]
        ok = n1 == c and n1 == n2
        out.data.update({"c": c, "N1": n1, "N2": n2, "ok": ok})
        out.line(f"c_i  = {c}")
        out.line(f"N1,i = {n1}")
        out.line(f"N2,i = {n2}")
        if not ok:
            raise CheckFailed("N_1,i = c_i = N_2,i fails")
    elif args.check == "zagier":
        B = varchenko.braid_arrangement(A.dim)
        if {h.normal for h in B.hyperplanes} != {h.normal for h in A.hyperplanes} or any(h.offset for h in A.hyperplanes):
            raise SmithCombError("the Zagier check applies to braid arrangements only")
        rep = varchenko.verify_zagier(A.dim)
        out.data["ok"] = rep.ok
        out.line("det matches the Zagier product" if rep.ok else "det MISMATCH")
        if not rep.ok:
            raise CheckFailed("Zagier determinant mismatch")


def cmd_braid(args, out):
    if args.check == "zagier":
        rep = varchenko.verify_zagier(args.n)
        out.data = {"n": args.n, "snf": [_cyclo(d) for d in rep.snf], "ok": rep.ok}
        out.line("SNF: " + ", ".join(_cyclo(d) for d in rep.snf))
        out.line("det matches the Zagier product" if rep.ok else "det MISMATCH")
        if not rep.ok:
            raise CheckFailed("Zagier determinant mismatch")
    elif args.check == "isotypic":
        if args.n != 4:
            raise SmithCombError("the isotypic table is for n = 4")
        rep = varchenko.isotypic_aggregate_check()
        out.data = {"ok": rep.ok, "braid_totals": {str(k): v for k, v in sorted(rep.braid_totals.items())},
                    "table_totals": {str(k): v for k, v in sorted(rep.table_totals.items())}}
        out.line("braid totals: " + format_cyclotomic(rep.braid_totals))
        out.line("table totals: " + format_cyclotomic(rep.table_totals))
        out.line("match" if rep.ok else "MISMATCH")
        if not rep.ok:
            raise CheckFailed("isotypic table does not aggregate to SNF(V_q(B_4))")
    else:
        A = varchenko.braid_matrix(args.n)
        d = exactmat.snf(A).diagonal
        out.data = {"n": args.n, "snf": [_cyclo(x) for x in d]}
        for x in d:
            out.line(_cyclo(x))


def cmd_jm(args, out):
    if args.sweep is not None:
        reps = jucysmurphy.sweep(args.sweep)
        out.data = {"reports": [r.to_json() for r in reps]}
        bad = [r for r in reps if not r.ok]
        for r in reps:
            out.line(f"{r.shape} k={r.k}: {'ok' if r.ok else 'MISMATCH'} computed={r.computed} conjectured={r.conjectured}")
        if bad:
            raise CheckFailed(f"{len(bad)} mismatches")
        return
    if args.shape is None or args.k is None:
        raise SmithCombError("give --shape and --k, or --sweep n")
    lam = _shape(args.shape)
    r = jucysmurphy.check_conjecture(lam, args.k)
    ev = jucysmurphy.integer_eigenvalues(jucysmurphy.jm_matrix(lam, args.k))
    out.data = r.to_json()
    out.data["eigenvalues"] = ev
    out.line(f"computed:    {r.computed}")
    out.line(f"conjectured: {r.conjectured}")
    out.line(f"eigenvalues: {ev}")
    if not r.ok:
        raise CheckFailed("conjecture mismatch")


def cmd_random(args, out):
    spec = randomsnf.SampleSpec(args.m, args.n, args.k, args.samples, args.seed)
    events = [e.strip() for e in args.events.split(",") if e.strip()]
    events = [f"a1={j}" for j in range(1, 6)] if events == ["a1"] else events
    stats = randomsnf.run_monte_carlo(spec, events, workers=args.workers)
    out.data = {"spec": {"m": spec.m, "n": spec.n, "k": spec.k, "N": spec.N, "seed": spec.seed},
                "rng": randomsnf.RNG_ALGORITHM, "events": [s.to_json() for s in stats]}
    out.line(f"seed {spec.seed}, {randomsnf.RNG_ALGORITHM}")
    for s in stats:
        ref = "" if s.reference is None else f"  limit {s.reference:.10f}"
        out.line(f"{s.event:>10}: {s.estimate:.6f} +- {s.stderr:.6f}{ref}")


# ---------------------------------------------------------------------------
# golden suite

def _golden() -> List[Tuple[str, Callable[[], bool]]]:
    def snf22():
        return exactmat.snf(exactmat.RingMatrix([[2, 4], [6, 8]])).diagonal == [2, 4]

    def counterexample():
        R = multipoly_ring(("x",))
        x = R.gens()[0]
        A = exactmat.RingMatrix.diagonal([R.coerce(2), x], ring=R)
        v = exactmat.refute_snf_by_specialization(A, [R.one, 2 * x], 2)
        return v.refuted and v.specialized_snf == [2, 2] and v.candidate_snf == [1, 4]

    def complete_graphs():
        for n in range(3, 9):
            G = sandpile.MultiGraph.complete(n)
            if sandpile.critical_group(G).factors != [n] * (n - 2) or sandpile.tree_count(G) != n ** (n - 2):
                return False
        return True

    def binomial2():
        return all(symfunc.binomial_snf_stats(2, n)[0] == ([1] + [2] * (n - 1) if n else []) for n in range(13))

    def binomial3():
        return symfunc.binomial_snf_stats(3, 8)[0] == [1, 3, 3, 3, 3, 6, 5394, 270029034]

    def psi():
        return all(symfunc.verify_thm_cai(n).ok for n in range(1, 13))

    def nie():
        return all(symfunc.verify_nie(n, k).ok for n in range(1, 10) for k in range(1, 5))

    def jt7552():
        n = UniPoly.gen(jacobitrudi.NVAR)

        def run(a, b):
            out = UniPoly.const(1, jacobitrudi.NVAR)
            for c in range(a, b + 1):
                out = out * (n + c)
            return out

        rep = jacobitrudi.verify_thm_jt((7, 5, 5, 2), 4)
        return rep.ok and rep.computed == [UniPoly.const(1, jacobitrudi.NVAR), run(0, 2), run(-2, 3), run(-3, 6)]

    def jtq():
        return jacobitrudi.verify_thm_jtq((2, 1), 2).ok

    def fig2():
        rep = gridpoly.verify_thm_bessen((3, 2), aliases=gridpoly.FIG2_ALIASES)
        R = multipoly_ring(gridpoly.ExtendedPartition((3, 2), gridpoly.FIG2_ALIASES).vars)
        a, b, c, d, e = R.gens()
        return rep.ok and rep.det == a * b * c * d * e * e

    def grid_ones():
        return all(gridpoly.specialize_grid(lam, "ones").det == 1
                   for n in range(1, 7) for lam in symfunc.partitions_of(n))

    def fig3():
        return len(varchenko.gz_diagonal(varchenko.FIG3)) == 6 and varchenko.verify_gz_by_specialization(varchenko.FIG3).ok

    def concurrent():
        A = varchenko.Arrangement(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 0)])
        try:
            varchenko.gz_diagonal(A)
        except SmithCombError:
            return True
        return False

    def dh():
        c = varchenko.char_coefficients(varchenko.FIG3)
        cnt = varchenko.nd_counts(varchenko.FIG3)
        return all(cnt.get((1, i), 0) == c[i] == cnt.get((2, i), 0) for i in range(len(c)))

    def zagier():
        return all(varchenko.verify_zagier(n).ok for n in range(2, 5))

    def isotypic():
        return varchenko.isotypic_aggregate_check().ok

    def jm51():
        r = jucysmurphy.check_conjecture((5, 1), 5)
        ev = jucysmurphy.integer_eigenvalues(jucysmurphy.jm_matrix((5, 1), 5))
        return r.ok and r.computed == [1, 1, 3, 3, 12] and sorted(ev) == [-1, 3, 3, 3, 4]

    def jm_sweep():
        return all(r.ok for n in range(1, 7) for r in jucysmurphy.sweep(n))

    def sigma():
        return abs(randomsnf.sigma_limit() - 0.84693590173) < 1e-9

    def cconst():
        return abs(randomsnf.c_constant() - 3.46275) < 1e-5

    return [
        ("SNF of [[2,4],[6,8]] is (2,4)", snf22),
        ("diag(2,x): candidate (1,2x) refuted at x=2", counterexample),
        ("critical group of K_n, n=3..8", complete_graphs),
        ("binomial matrix a=2, n<=12", binomial2),
        ("binomial matrix a=3, n=8", binomial3),
        ("psi_n peeling rule, n<=12", psi),
        ("psi_n,k peeling rule, n<=9, k<=4", nie),
        ("Jacobi-Trudi lambda=(7,5,5,2)", jt7552),
        ("q-Jacobi-Trudi lambda=(2,1)", jtq),
        ("grid polynomials lambda=(3,2): det abcde^2", fig2),
        ("grid all-ones det 1, |lambda|<=6", grid_ones),
        ("three-line arrangement diagonal form", fig3),
        ("concurrent lines refused", concurrent),
        ("N_1,i = c_i = N_2,i on the three-line arrangement", dh),
        ("Zagier determinant n=2..4", zagier),
        ("isotypic table n=4 (as published)", isotypic),
        ("Jucys-Murphy (5,1), k=5", jm51),
        ("Jucys-Murphy conjecture, all shapes n<=6", jm_sweep),
        ("Ekedahl limit 0.84693590173", sigma),
        ("constant c = 3.46275", cconst),
    ]


def cmd_paper_check(args, out):
    rows = []
    for name, fn in _golden():
        t = time.time()
        try:
            ok = bool(fn())
        except SmithCombError as e:
            ok = False
            name = f"{name} ({e})"
        rows.append((name, ok, time.time() - t))
    width = max(len(r[0]) for r in rows)
    for name, ok, dt in rows:
        out.line(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  ({dt:.2f}s)")
    out.data = {"checks": [{"name": n, "pass": ok} for n, ok, _ in rows]}
    failed = sum(1 for _, ok, _ in rows if not ok)
    out.line(f"{len(rows) - failed}/{len(rows)} passed")
    if failed:
        raise CheckFailed(f"{failed} checks failed")


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-bits", type=int, default=exactmat.DEFAULT_BUDGET_BITS)
    common.add_argument("--out", help="write the report to this file")

    p = argparse.ArgumentParser(prog="smithcomb", description="Smith normal forms in combinatorics")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=fn)
        return sp

    s = add("snf", cmd_snf, "Smith normal form of a matrix file")
    s.add_argument("--file", required=True)
    s.add_argument("--ring", default="z", help="z, q, q[x] (default z)")
    s.add_argument("--transforms", action="store_true")
    s.add_argument("--strategy", default="auto", choices=["auto", "euclid", "local"])

    s = add("minors", cmd_minors, "invariant factors from gcds of minors")
    s.add_argument("--file", required=True)
    s.add_argument("--ring", default="z", help="z, q[x] or z[x,y,...]")
    s.add_argument("--refute-at", type=int, help="test the minor-gcd candidate at this integer point")
    s.add_argument("--candidate", help="comma-separated candidate diagonal to test")
    s.add_argument("--at", type=int, default=2, help="point for --candidate")

    s = add("cokernel", cmd_cokernel, "abelian group Z^n / rowspace")
    s.add_argument("--file", required=True)
    s.add_argument("--ring", default="z")

    s = add("sandpile", cmd_sandpile, "critical groups and chip-firing")
    s.add_argument("action", choices=["group", "trees", "dynamic", "stabilize", "recurrent"])
    s.add_argument("--graph")
    s.add_argument("--complete", type=int)
    s.add_argument("--sink", type=int)
    s.add_argument("--config", help="chip counts on the non-sink vertices")

    s = add("symfunc", cmd_symfunc, "psi operators and binomial matrices")
    s.add_argument("action", choices=["psi", "binomial"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--a", type=int, default=2)

    s = add("jt", cmd_jt, "specialized Jacobi-Trudi matrices")
    s.add_argument("--shape", required=True)
    s.add_argument("--t", type=int)
    s.add_argument("--q", action="store_true", help="q-analogue over Q(q)[n]")

    s = add("grid", cmd_grid, "matrices of generating polynomials P_rs")
    s.add_argument("--shape", required=True)
    s.add_argument("--spec", default="symbolic", choices=["symbolic", "ones", "q"])
    s.add_argument("--letters", action="store_true", help="name the cells of (3,2) a..e")

    s = add("varchenko", cmd_varchenko, "hyperplane arrangements")
    s.add_argument("--file")
    s.add_argument("--fig3", action="store_true", help="the built-in three-line example")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--symbolic", action="store_true")
    g.add_argument("--q", action="store_true")
    s.add_argument("--check", choices=["gz", "zagier", "dh"])

    s = add("braid", cmd_braid, "q-Varchenko matrix of the braid arrangement")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--check", choices=["zagier", "isotypic"])

    s = add("jm", cmd_jm, "Jucys-Murphy matrices")
    s.add_argument("--shape")
    s.add_argument("--k", type=int)
    s.add_argument("--sweep", type=int, metavar="N")

    s = add("random", cmd_random, "Monte Carlo SNF statistics")
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--k", type=int, default=100_000)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--events", default="a1")
    s.add_argument("--workers", type=int, default=1)

    add("paper-check", cmd_paper_check, "run the golden suite")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args)
    status = 0
    try:
        args.func(args, out)
    except CheckFailed as e:
        out.line(f"check failed: {e}")
        out.data.setdefault("error", str(e))
        status = 1
    except (SmithCombError, ValueError, TypeError, OSError) as e:
        print(f"smithcomb: error: {e}", file=sys.stderr)
        return 2
    out.emit(args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
