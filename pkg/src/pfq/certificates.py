"""Named end-to-end checks and their JSON reports."""
from __future__ import annotations

import hashlib
import json
import random
import re
import time
from dataclasses import dataclass
from itertools import combinations_with_replacement
from pathlib import Path

from . import __version__
from ._io import is_file
from .arith import DEFAULT_PRIMES, GF, QQ, is_prime
from .errors import BadPrime, DegenerateSlicing, Inconclusive, SamplingError
from .groebner import Verdict, smoothness_certificate
from .hilbert import (BUILTIN_DIMS, BUILTIN_IDEALS, builtin_ideal, curve_invariants, hilbert_data,
                      load_ideal, slice_degree_report)
from .linalg import decompose_in_ideal, quadratic_form_rank
from .pfaffian import (SkewPolyMatrix, classify_kernel, jacobian_span_rank, load_f0, load_m0,
                       pfaffian_certificate, sample_points_on_quartic)
from .poly import Polynomial, VarContext, parse_poly, random_form
from .sheafcoh import (BUILTIN_COMPLEXES, ChernData, TwistedFreeComplex, builtin_complex, chern_twist,
                       complex_cohomology, complex_euler, dimension_audit, euler_char_bundle,
                       zero_locus_invariants)


RNG_DESCRIPTION = ("Python random.Random (MT19937, CPython stdlib); one generator per sub-task, "
                   "sub-seed = seed * 1000003 + attempt, except ci-quartic cofactors which use the "
                   "string seed 'ci-quartic/<seed>/<attempt>'")

CERTIFICATES = ("pfaffian-identity", "jacobian-span", "smoothness", "curve-invariants", "slice-degree",
                "resolution-cohomology", "chern", "zero-locus", "kernel-sample", "ci-quartic", "audit")

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}

# reference values for the shipped inputs
SLICE_EXPECT = {"pfaffian7": 14, "pfaffian7-symbolic": 14, "grass27": 42, "ci-quadrics": 8, "twisted-cubic": 3}
CURVE_EXPECT = {"pfaffian7": (1, 14, 15), "ci-quadrics": (1, 8, 5), "twisted-cubic": (1, 3, 0)}
HF_EXPECT = {"pfaffian7": [1, 5, 15, 28, 42, 56]}
ZERO_LOCUS_EXPECT = {(2, 6): (6, 4), (3, 14): (14, 15), (2, 8): (8, 5)}


@dataclass
class RunConfig:
    matrix: str | None = None
    poly: str | None = None
    ideal: str | None = None
    complex: str | None = None
    prime: int | None = None
    seed: int = 0
    tmax: int | None = None
    count: int | None = None
    cache_dir: str | None = None
    expect: str | None = None
    chern: str | None = None
    twist: int | None = None
    dim: int | None = None


@dataclass
class CertificateReport:
    certificate: str
    inputs: dict
    primes: list
    seeds: list
    payload: dict
    status: str
    runtime_ms: int = 0
    version: str = __version__
    rng: str = RNG_DESCRIPTION

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def as_dict(self) -> dict:
        return {"certificate": self.certificate, "version": self.version, "inputs": self.inputs,
                "primes": self.primes, "seeds": self.seeds, "rng": self.rng, "payload": self.payload,
                "status": self.status, "pass": self.passed, "runtime_ms": self.runtime_ms}

    def payload_digest(self) -> str:
        return _sha(json.dumps(self.payload, sort_keys=True))

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def _sha(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode()
    return hashlib.sha256(text).hexdigest()


def _status(checks: dict, inconclusive: bool = False) -> str:
    if not all(checks.values()):
        return FAIL
    return INCONCLUSIVE if inconclusive else PASS


def _primes(cfg: RunConfig, both: bool) -> list:
    if cfg.prime is not None:
        if not is_prime(cfg.prime):
            raise BadPrime(f"{cfg.prime} is not prime")
        return [cfg.prime]
    return list(DEFAULT_PRIMES) if both else [DEFAULT_PRIMES[0]]


# ---------------------------------------------------------------------------
# inputs



def _read_source(source: str) -> tuple[str, str]:
    """Return ``(text, digest)`` for a file path or inline string."""
    if is_file(source):
        data = Path(source).read_bytes()
        return data.decode(), _sha(data)
    return source, _sha(source)


def _infer_context(text: str) -> VarContext:
    names = sorted(set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text)))
    numbered = [re.fullmatch(r"x(\d+)", v) for v in names]
    if names and all(numbered):
        top = max(int(m.group(1)) for m in numbered)
        return VarContext.numbered(max(top, 5))
    return VarContext(names)


def load_poly(source: str | None, field=QQ) -> tuple[Polynomial, str]:
    if source is None or source == "f0":
        return load_f0(field), "builtin:f0"
    if source == "fermat":
        ctx = VarContext.numbered(5)
        return parse_poly(" + ".join(f"{v}^4" for v in ctx.names), ctx, field), "builtin:fermat"
    text, digest = _read_source(source)
    text = text.strip()
    return parse_poly(text, _infer_context(text), field), digest


def load_matrix(source: str | None, field=QQ) -> tuple[SkewPolyMatrix, str]:
    if source is None or source == "m0":
        return load_m0(field), "builtin:m0"
    text, digest = _read_source(source)
    return SkewPolyMatrix.from_json(json.loads(text), field), digest


def load_ideal_input(source: str | None, p: int, seed: int, default: str) -> tuple[list, str, str | None]:
    """``(generators, digest, builtin name or None)``."""
    name = source or default
    if name in BUILTIN_IDEALS:
        return builtin_ideal(name, p, seed), f"builtin:{name}", name
    text, digest = _read_source(name)
    return load_ideal(json.loads(text), GF(p)), digest, None


def load_complex(source: str | None, default: str) -> tuple[TwistedFreeComplex, str, str | None]:
    name = source or default
    if name in BUILTIN_COMPLEXES:
        return builtin_complex(name), f"builtin:{name}", name
    text, digest = _read_source(name)
    return TwistedFreeComplex.from_json(json.loads(text)), digest, None


def _parse_chern(text: str | None, default: tuple) -> ChernData:
    if text is None:
        return ChernData(*default)
    k, alpha = (int(s) for s in text.split(","))
    return ChernData(k, alpha)


def _parse_tuple(text: str | None):
    return None if text is None else tuple(int(s) for s in text.split(","))


# ---------------------------------------------------------------------------
# the instanton construction


def veronese_lift(q: Polynomial, vctx: VarContext) -> Polynomial:
    """Linear form in the Veronese coordinates ``y_ij <-> x_i x_j`` (i <= j)."""
    n = q.nvars
    pairs = list(combinations_with_replacement(range(n), 2))
    terms = {}
    for e, c in q.terms.items():
        idx = [i for i, a in enumerate(e) for _ in range(a)]
        k = pairs.index(tuple(idx))
        terms[tuple(int(m == k) for m in range(len(pairs)))] = c
    return Polynomial(vctx, terms, q.field)


def veronese_context(n: int) -> VarContext:
    return VarContext([f"y{i + 1}{j + 1}" for i, j in combinations_with_replacement(range(n), 2)])


def ci_quartic_pipeline(quadrics: list, seed: int, p: int = DEFAULT_PRIMES[0], max_retries: int = 5,
                        cache_dir=None) -> dict:
    """Build ``F = sum q_i * qt_i`` with random ``qt_i``, and certify what can be certified about it."""
    if len(quadrics) != 3 or any(not q.is_homogeneous() or q.degree() != 2 for q in quadrics):
        raise ValueError("expected three homogeneous quadrics")
    gf = GF(p)
    quadrics = [q.to_field(gf) for q in quadrics]
    ctx = quadrics[0].ctx
    attempts = []
    for k in range(max_retries):
        # a named stream, so cofactors never replay the draw that produced the quadrics
        stream = f"ci-quartic/{seed}/{k}"
        rng = random.Random(stream)
        cofactors = [random_form(ctx, 2, gf, rng) for _ in range(3)]
        F = sum((q * c for q, c in zip(quadrics, cofactors)), Polynomial.zero(ctx, gf))
        verdict = smoothness_certificate(F, p, cache_dir=cache_dir).verdict
        attempts.append({"stream": stream, "verdict": verdict.value})
        if verdict is Verdict.SMOOTH:
            break
    else:
        return {"attempts": attempts, "smooth": False}

    recombined = sum((q * c for q, c in zip(quadrics, cofactors)), Polynomial.zero(ctx, gf))
    solved = decompose_in_ideal(F, quadrics)
    vctx = veronese_context(len(ctx))
    lifts = [veronese_lift(q, vctx) for q in quadrics]
    lifts_t = [veronese_lift(c, vctx) for c in cofactors]
    Q = sum((a * b for a, b in zip(lifts, lifts_t)), Polynomial.zero(vctx, gf))
    xs = Polynomial.gens(ctx, gf)
    images = {name: xs[i] * xs[j] for name, (i, j) in
              zip(vctx.names, combinations_with_replacement(range(len(ctx)), 2))}
    inv = curve_invariants(quadrics, p, cache_dir)
    return {
        "attempts": attempts,
        "smooth": True,
        "quadrics": [str(q) for q in quadrics],
        "cofactors": [str(c) for c in cofactors],
        "quartic": str(F),
        "decomposition_exact": recombined == F,
        "ideal_membership": solved is not None,
        "veronese_rank": quadratic_form_rank(Q),
        "veronese_pullback_ok": Q.substitute(images, ctx) == F,
        "curve_invariants": list(inv.as_tuple()),
    }


# ---------------------------------------------------------------------------
# runners: each returns (inputs, primes, seeds, payload, status)


def _run_pfaffian_identity(cfg):
    M, mdig = load_matrix(cfg.matrix)
    F, fdig = load_poly(cfg.expect or cfg.poly)
    cert = pfaffian_certificate(M, F, mdig)
    payload = {**cert.as_dict(), "claimed_terms": len(F), "claimed_degree": F.degree()}
    return {"matrix": mdig, "expect": fdig}, [], [], payload, _status({"identity": not cert.mismatch})


def _run_jacobian_span(cfg):
    M, mdig = load_matrix(cfg.matrix)
    primes = _primes(cfg, both=True)
    ranks = {str(p): jacobian_span_rank(M, p) for p in primes}
    checks = {f"rank_{p}": r == 70 for p, r in ranks.items()}
    return {"matrix": mdig}, primes, [], {"ranks": ranks, "expected": 70, "checks": checks}, _status(checks)


def _run_smoothness(cfg):
    F, fdig = load_poly(cfg.poly)
    primes = _primes(cfg, both=True)
    results = [smoothness_certificate(F, p, cfg.cache_dir).as_dict() for p in primes]
    verdicts = {r["verdict"] for r in results}
    payload = {"poly": str(F), "results": results}
    if Verdict.SINGULAR.value in verdicts:
        status = FAIL
    elif verdicts == {Verdict.SMOOTH.value}:
        status = PASS
    else:
        status = INCONCLUSIVE
    return {"poly": fdig}, primes, [], payload, status


def _run_curve_invariants(cfg):
    primes = _primes(cfg, both=False)
    p = primes[0]
    count = cfg.count or 1
    seeds = [cfg.seed + i for i in range(count)]
    tmax = cfg.tmax if cfg.tmax is not None else 10
    runs = []
    checks = {}
    digest = None
    for s in seeds:
        gens, digest, name = load_ideal_input(cfg.ideal, p, s, "pfaffian7")
        data = hilbert_data(gens, p, tmax, cfg.cache_dir)
        inv = curve_invariants(gens, p, cfg.cache_dir).as_tuple()
        runs.append({"seed": s, **data.as_dict(), "invariants": list(inv)})
        expect = _parse_tuple(cfg.expect) or CURVE_EXPECT.get(name)
        if expect is not None:
            checks[f"invariants_seed{s}"] = tuple(inv) == tuple(expect)
        hf = HF_EXPECT.get(name)
        if hf is not None and tmax >= len(hf) - 1:
            checks[f"hf_seed{s}"] = data.hf_table[: len(hf)] == hf
    return {"ideal": digest}, primes, seeds, {"runs": runs, "checks": checks}, _status(checks)


def _run_slice_degree(cfg):
    primes = _primes(cfg, both=False)
    p = primes[0]
    gens, digest, name = load_ideal_input(cfg.ideal, p, cfg.seed, "pfaffian7-symbolic")
    dim = cfg.dim if cfg.dim is not None else BUILTIN_DIMS.get(name)
    if dim is None:
        raise ValueError("--dim is required for a non-builtin ideal")
    rep = slice_degree_report(gens, dim, p, cfg.seed, cache_dir=cfg.cache_dir)
    expect = int(cfg.expect) if cfg.expect is not None else SLICE_EXPECT.get(name)
    checks = {"degree": rep.degree == expect} if expect is not None else {}
    payload = {"degree": rep.degree, "dim": dim, "expected": expect, "sliced_vars": rep.sliced_vars,
               "attempts": [list(a) for a in rep.attempts], "checks": checks}
    return {"ideal": digest}, primes, [cfg.seed], payload, _status(checks)


def _column_json(col):
    return [e.as_json() for e in col]


def _run_resolution_cohomology(cfg):
    cx, digest, name = load_complex(cfg.complex, "rodland")
    tmax = cfg.tmax if cfg.tmax is not None else 20
    twists = [cfg.twist] if cfg.twist is not None else list(range(-tmax, tmax + 1))
    table = {t: complex_cohomology(cx, t) for t in twists}
    checks = {}
    for t, col in table.items():
        if all(e.forced for e in col):
            alt = sum((-1) ** i * e.lo for i, e in enumerate(col))
            checks[f"euler_t{t}"] = alt == complex_euler(cx, t)
    primes, seeds = [], []
    extra = {}
    if name == "rodland":
        col = complex_cohomology(cx, 0)
        checks["h2_is_21"] = [e.value for e in col] == [0, 0, 21, 0, 0]
    elif name == "eacm":
        checks["h0_is_8"] = complex_cohomology(cx, 0)[0].value == 8
        checks["acm"] = all(complex_cohomology(cx, t)[i].value == 0
                            for t in range(-20, 21) for i in (1, 2))
    elif name == "be-curve":
        checks["h1_at_2_is_1"] = complex_cohomology(cx, 2)[1].value == 1
        checks["euler_14t_minus_14"] = all(complex_euler(cx, t) == 14 * t - 14 for t in range(3, 21))
        p = _primes(cfg, both=False)[0]
        primes, seeds = [p], [cfg.seed]
        hf = hilbert_data(builtin_ideal("pfaffian7", p, cfg.seed), p, 10, cfg.cache_dir).hf_table
        forced = {t: complex_cohomology(cx, t)[0].value for t in range(0, 11)}
        extra["groebner_hf"] = hf
        checks["matches_groebner_hf"] = all(v == hf[t] for t, v in forced.items() if v is not None)
    wanted = [cfg.twist] if cfg.twist is not None else ([0] if name in ("rodland", "eacm") else [])
    unforced = any(not e.forced for t in wanted for e in table[t])
    payload = {"ambient_dim": cx.ambient_dim, "terms": cx.to_json()["terms"],
               "table": {str(t): _column_json(c) for t, c in table.items()},
               "euler": {str(t): complex_euler(cx, t) for t in twists}, "checks": checks, **extra}
    return {"complex": digest}, primes, seeds, payload, _status(checks, unforced)


def _chi_json(c: ChernData):
    chi = euler_char_bundle(c)
    return {"k": c.k, "alpha": c.alpha, "chi": str(chi), "integral": chi.denominator == 1}


def _run_chern(cfg):
    c = _parse_chern(cfg.chern, (3, 14))
    n = cfg.twist or 0
    twisted = chern_twist(c, n)
    checks = {
        "chi_3_14_is_8": euler_char_bundle(ChernData(3, 14)) == 8,
        "k0_specialization": all(euler_char_bundle(ChernData(0, a)) * 2 == 4 - a for a in range(21)),
        "twist1_specialization": all(euler_char_bundle(chern_twist(ChernData(0, a), 1)) * 2 == 20 - 3 * a
                                     for a in range(21)),
        "chi_E_tensor_IC": euler_char_bundle(ChernData(3, 14)) - (3 * 14 + 2 * (1 - 15)) == -6,
        "integral": euler_char_bundle(twisted).denominator == 1,
    }
    payload = {"input": _chi_json(c), "twist": n, "twisted": _chi_json(twisted), "checks": checks}
    return {"chern": _sha(f"{c.k},{c.alpha}")}, [], [], payload, _status(checks)


def _run_zero_locus(cfg):
    c = _parse_chern(cfg.chern, (3, 14))
    deg, genus = zero_locus_invariants(c)
    expect = _parse_tuple(cfg.expect) or ZERO_LOCUS_EXPECT.get((c.k, c.alpha))
    checks = {"invariants": (deg, genus) == tuple(expect)} if expect else {}
    payload = {"k": c.k, "alpha": c.alpha, "degree": deg, "arithmetic_genus": genus,
               "expected": list(expect) if expect else None, "checks": checks}
    return {"chern": _sha(f"{c.k},{c.alpha}")}, [], [], payload, _status(checks)


def _run_kernel_sample(cfg):
    M, mdig = load_matrix(cfg.matrix)
    F, fdig = load_poly(cfg.poly)
    p = _primes(cfg, both=False)[0]
    count = cfg.count if cfg.count is not None else 200
    pts = sample_points_on_quartic(F, p, count, cfg.seed)
    ranks, kdims, bad = {}, {}, []
    for pt in pts:
        kc = classify_kernel(M, pt, p)
        ranks[str(kc.rank)] = ranks.get(str(kc.rank), 0) + 1
        kdims[str(kc.kernel_dim)] = kdims.get(str(kc.kernel_dim), 0) + 1
        if kc.rank != M.n - 2 or kc.kernel_dim != 2 or not kc.grassmann_ok:
            bad.append(list(pt))
    checks = {"count": len(pts) == count, "all_rank_6_grassmann": not bad}
    payload = {"count": len(pts), "rank_histogram": ranks, "kernel_dim_histogram": kdims,
               "failures": bad, "points_digest": _sha(json.dumps(pts)), "checks": checks}
    return {"matrix": mdig, "poly": fdig}, [p], [cfg.seed], payload, _status(checks)


def _run_ci_quartic(cfg):
    p = _primes(cfg, both=False)[0]
    quadrics, digest, _ = load_ideal_input(cfg.ideal, p, cfg.seed, "ci-quadrics")
    result = ci_quartic_pipeline(quadrics, cfg.seed, p, cache_dir=cfg.cache_dir)
    if not result["smooth"]:
        return {"ideal": digest}, [p], [cfg.seed], {**result, "checks": {}}, INCONCLUSIVE
    checks = {
        "decomposition_exact": result["decomposition_exact"] and result["ideal_membership"],
        "veronese_rank_6": result["veronese_rank"] == 6,
        "veronese_pullback": result["veronese_pullback_ok"],
        "curve_invariants": result["curve_invariants"] == [1, 8, 5],
    }
    return {"ideal": digest}, [p], [cfg.seed], {**result, "checks": checks}, _status(checks)


def _run_audit(cfg):
    rows = [e.as_dict() for e in dimension_audit()]
    checks = {r["name"]: r["ok"] for r in rows}
    return {}, [], [], {"table": rows, "checks": checks}, _status(checks)


_RUNNERS = {
    "pfaffian-identity": _run_pfaffian_identity,
    "jacobian-span": _run_jacobian_span,
    "smoothness": _run_smoothness,
    "curve-invariants": _run_curve_invariants,
    "slice-degree": _run_slice_degree,
    "resolution-cohomology": _run_resolution_cohomology,
    "chern": _run_chern,
    "zero-locus": _run_zero_locus,
    "kernel-sample": _run_kernel_sample,
    "ci-quartic": _run_ci_quartic,
    "audit": _run_audit,
}


def run_certificate(name: str, config: RunConfig | None = None) -> CertificateReport:
    """Run one named pipeline; raises on unknown names and unusable inputs."""
    if name not in _RUNNERS:
        raise KeyError(f"unknown certificate {name!r}; choose from {', '.join(CERTIFICATES)}")
    cfg = config or RunConfig()
    start = time.perf_counter()
    try:
        inputs, primes, seeds, payload, status = _RUNNERS[name](cfg)
    except (Inconclusive, DegenerateSlicing, SamplingError) as exc:
        inputs, primes, seeds, payload, status = {}, [], [], {"reason": str(exc)}, INCONCLUSIVE
    elapsed = int((time.perf_counter() - start) * 1000)
    return CertificateReport(name, inputs, primes, seeds, payload, status, elapsed)
