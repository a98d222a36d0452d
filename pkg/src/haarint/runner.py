"""Problem descriptions, route execution and JSON reports.

A problem names one integral, its size and parameters, and where its
matrices come from: explicit matrices, explicit spectra, or a seeded
generator.  :func:`run` evaluates every requested route (``closed``,
``charsum``, ``mc``) and compares each pair: deterministic routes against a
relative tolerance, Monte Carlo against ``nsigma`` standard errors.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import charexp, closedform, haar_mc
from .errors import HaarintError, InputError
from .haar_mc import RngStream

__all__ = [
    "SpecError",
    "ProblemSpec",
    "gen_matrix",
    "run",
    "run_file",
    "to_json",
    "report_csv",
    "encode_complex",
    "parse_complex",
    "VERSION",
]

VERSION = "0.1.0"
INTEGRALS = ("zis1", "zis2", "zfh1", "zfh2", "cor_tw", "fh_standard", "jis", "jfh")
ROUTES = ("closed", "charsum", "mc")
# number of matrices / spectra each integral takes
_N_MATRICES = {"zis1": 2, "zis2": 4, "zfh1": 2, "zfh2": 4, "jis": 2, "jfh": 2, "cor_tw": 0, "fh_standard": 0}
_N_SPECTRA = {"zis1": 1, "zis2": 2, "zfh1": 1, "zfh2": 2, "jis": 1, "jfh": 1, "cor_tw": 0, "fh_standard": 0}
_HAS_BETA = ("zfh1", "zfh2", "fh_standard", "jfh")
_NO_CHARSUM = ("fh_standard", "jis", "jfh")


class SpecError(InputError):
    """The problem description does not parse or validate."""


def parse_complex(v, name="value"):
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise SpecError(f"{name}: expected a number or [re, im] pair, got {v!r}")


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def _parse_matrix(m, N, name):
    if not isinstance(m, list) or len(m) != N or any(not isinstance(r, list) or len(r) != N for r in m):
        raise SpecError(f"{name}: expected a {N}x{N} nested list")
    return np.array([[parse_complex(x, name) for x in row] for row in m], dtype=complex)


@dataclass
class ProblemSpec:
    """A validated problem description."""

    integral: str
    N: int
    alpha: complex = 0j
    beta: complex | None = None
    sign: str = "+"
    b: complex = 0j
    matrices: list | None = None
    spectra: list | None = None
    generator: dict | None = None
    routes: tuple = ("closed",)
    mc_samples: int = 100_000
    seed: int = 0
    normalization: str = "unit_mean"
    rel_tol: float = 1e-8
    nsigma: float = 4.0
    raw: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("problem must be a JSON object")
        known = {"integral", "N", "parameters", "matrices", "spectra", "generator", "routes", "mc_samples",
                 "seed", "normalization", "tolerances"}
        unknown = set(d) - known
        if unknown:
            raise SpecError(f"unknown keys: {sorted(unknown)}")
        integral = d.get("integral")
        if integral not in INTEGRALS:
            raise SpecError(f"integral must be one of {INTEGRALS}")
        N = d.get("N")
        if not isinstance(N, int) or isinstance(N, bool) or N < 1:
            raise SpecError("N must be a positive integer")
        params = d.get("parameters", {})
        if not isinstance(params, dict):
            raise SpecError("parameters must be an object")
        alpha = parse_complex(params.get("alpha", 0), "alpha")
        beta = None
        if integral in _HAS_BETA:
            if "beta" not in params:
                raise SpecError(f"{integral} needs parameters.beta")
            beta = parse_complex(params["beta"], "beta")
        sign = params.get("sign", "+")
        if sign not in ("+", "-"):
            raise SpecError("sign must be '+' or '-'")
        b = parse_complex(params.get("b", 0), "b")

        sources = [k for k in ("matrices", "spectra", "generator") if k in d]
        need = _N_MATRICES[integral]
        if need and len(sources) != 1:
            raise SpecError("exactly one of matrices / spectra / generator must be given")
        if not need and sources:
            raise SpecError(f"{integral} takes no matrices, spectra or generator")
        matrices = spectra = generator = None
        if "matrices" in d:
            ms = d["matrices"]
            if not isinstance(ms, list) or len(ms) != need:
                raise SpecError(f"{integral} needs {need} matrices")
            matrices = [_parse_matrix(m, N, f"matrices[{i}]") for i, m in enumerate(ms)]
        if "spectra" in d:
            ss = d["spectra"]
            if not isinstance(ss, list) or len(ss) != _N_SPECTRA[integral]:
                raise SpecError(f"{integral} needs {_N_SPECTRA[integral]} spectra")
            spectra = []
            for i, s in enumerate(ss):
                if not isinstance(s, list) or len(s) != N:
                    raise SpecError(f"spectra[{i}] must list N values")
                spectra.append(np.array([parse_complex(x, f"spectra[{i}]") for x in s], dtype=complex))
        if "generator" in d:
            g = d["generator"]
            if not isinstance(g, dict) or "seed" not in g or "rho" not in g:
                raise SpecError("generator needs seed and rho")
            rho = g["rho"]
            if not isinstance(rho, (int, float)) or rho <= 0:
                raise SpecError("generator.rho must be positive")
            non_integer = any(
                p is not None and not (p.imag == 0 and float(p.real).is_integer()) for p in (alpha, beta)
            )
            if non_integer and not rho < 1:
                raise SpecError("generator.rho must lie in (0, 1) for non-integer exponents")
            generator = {"seed": int(g["seed"]), "rho": float(rho)}

        routes = d.get("routes", ["closed"])
        if routes == "all":
            routes = [r for r in ROUTES if not (r == "charsum" and integral in _NO_CHARSUM)]
        if not isinstance(routes, list) or not routes or any(r not in ROUTES for r in routes):
            raise SpecError(f"routes must be a non-empty subset of {ROUTES}")
        if "charsum" in routes and integral in _NO_CHARSUM:
            raise SpecError(f"{integral} has no character-sum route")
        mc_samples = d.get("mc_samples", 100_000)
        if not isinstance(mc_samples, int) or mc_samples < 1:
            raise SpecError("mc_samples must be a positive integer")
        seed = d.get("seed", 0)
        if not isinstance(seed, int):
            raise SpecError("seed must be an integer")
        normalization = d.get("normalization", "unit_mean")
        if normalization not in closedform.NORMALIZATIONS:
            raise SpecError(f"normalization must be one of {closedform.NORMALIZATIONS}")
        tol = d.get("tolerances", {})
        return cls(
            integral=integral, N=N, alpha=alpha, beta=beta, sign=sign, b=b, matrices=matrices, spectra=spectra,
            generator=generator, routes=tuple(dict.fromkeys(routes)), mc_samples=mc_samples, seed=seed,
            normalization=normalization, rel_tol=float(tol.get("relative", 1e-8)),
            nsigma=float(tol.get("nsigma", 4.0)), raw=d,
        )


def _power_iteration_norm(M, rng, max_iter=5000, tol=1e-15):
    """Largest singular value of ``M`` by power iteration on ``M^dagger M``."""
    G = M.conj().T @ M
    v = rng.standard_normal(M.shape[1]) + 1j * rng.standard_normal(M.shape[1])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = G @ v
        new = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        if abs(new - lam) <= tol * abs(new):
            lam = new
            break
        lam = new
    return math.sqrt(max(lam, 0.0))


def gen_matrix(N: int, norm_bound: float, seed) -> np.ndarray:
    """Random complex matrix with operator norm ``norm_bound * (0.5 + 0.5 u)``, ``u`` uniform."""
    if norm_bound <= 0:
        raise InputError("norm_bound must be positive")
    stream = seed if isinstance(seed, RngStream) else RngStream(int(seed))
    rng = stream.generator
    while True:
        M = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2)
        sigma = _power_iteration_norm(M, rng)
        if sigma == 0:
            continue
        M = M / sigma
        if np.linalg.svd(M, compute_uv=False)[-1] < 1e-8:
            continue
        target = norm_bound * (0.5 + 0.5 * rng.uniform())
        # power iteration approaches sigma_max from below
        return M * target * (1 - 1e-12)


def _problem_inputs(spec: ProblemSpec):
    """Spectra for the deterministic routes and matrices for Monte Carlo."""
    k = _N_MATRICES[spec.integral]
    if not k:
        return None, None
    if spec.generator is not None:
        mats = [gen_matrix(spec.N, spec.generator["rho"], RngStream(spec.generator["seed"], i + 1))
                for i in range(k)]
    elif spec.matrices is not None:
        mats = spec.matrices
    else:
        mats = None
    if mats is not None:
        if k == 2:
            spectra = [closedform.spectrum_of_product(mats[0], mats[1]).as_array()]
        else:
            spectra = [closedform.spectrum_of_product(mats[0], mats[3]).as_array(),
                       closedform.spectrum_of_product(mats[1], mats[2]).as_array()]
        return spectra, mats
    spectra = spec.spectra
    rng = RngStream(spec.seed, 10_000)
    if k == 2:
        A, D = haar_mc.realize_pair(spectra[0], rng.generator)
        return spectra, [A, D]
    A, D = haar_mc.realize_pair(spectra[0], rng.generator)
    B, C = haar_mc.realize_pair(spectra[1], rng.generator)
    return spectra, [A, B, C, D]


def _closed(spec, spectra):
    I, a, b = spec.integral, spec.alpha, spec.beta
    if I == "zis1":
        return closedform.zis1(spectra[0], a)
    if I == "zis2":
        return closedform.zis2(spectra[0], spectra[1], a)
    if I == "zfh1":
        return closedform.zfh1(spectra[0], a, b)
    if I == "zfh2":
        return closedform.zfh2(spectra[0], spectra[1], a, b)
    if I == "cor_tw":
        return closedform.cor_tw(a, spec.sign, spec.b, spec.N, spec.normalization)
    if I == "fh_standard":
        return closedform.fh_standard(a, b, spec.N, normalization=spec.normalization)
    ctx = closedform.ClosedFormContext.create(spec.N, a, b)
    return closedform.j_pfaffian(spectra[0], ctx, "IS" if I == "jis" else "FH")


def _charsum(spec, spectra):
    I, a, b = spec.integral, spec.alpha, spec.beta
    if I == "zis1":
        return charexp.charsum_zis1(spectra[0], a)
    if I == "zis2":
        return charexp.charsum_zis2(spectra[0], spectra[1], a)
    if I == "zfh1":
        return charexp.charsum_zfh1(spectra[0], a, b)
    if I == "zfh2":
        return charexp.charsum_zfh2(spectra[0], spectra[1], a, b)
    s = 1 if spec.sign == "+" else -1
    res = charexp.charsum_zis1([s * spec.b] * spec.N, a)
    if spec.normalization == "paper":
        res.value = res.value / (2 * math.pi) ** spec.N
    return res


def _mc(spec, mats, n, seed):
    I, a, b = spec.integral, spec.alpha, spec.beta
    rng = RngStream(seed, 1)
    if I == "zis1":
        return haar_mc.mc_zis1(mats[0], mats[1], a, n, rng)
    if I == "zis2":
        return haar_mc.mc_zis2(*mats, a, n, rng)
    if I == "zfh1":
        return haar_mc.mc_zfh1(mats[0], mats[1], a, b, n, rng)
    if I == "zfh2":
        return haar_mc.mc_zfh2(*mats, a, b, n, rng)
    if I == "jis":
        return haar_mc.mc_jis(mats[0], mats[1], a, n, rng)
    if I == "jfh":
        return haar_mc.mc_jfh(mats[0], mats[1], a, b, n, rng)
    if I == "cor_tw":
        est = haar_mc.mc_cor_tw(a, spec.sign, spec.b, spec.N, n, rng)
    else:
        est = haar_mc.mc_fh_standard(a, b, spec.N, n, rng)
    if spec.normalization == "paper":
        # Monte Carlo always estimates the Haar average itself
        est.flags = tuple(est.flags) + ("haar_average_unnormalized",)
    return est


def _jsonable(obj):
    if isinstance(obj, complex):
        return encode_complex(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def compare(name_a, va, name_b, vb, stderr=None, rel_tol=1e-8, nsigma=4.0, asserted=True):
    """One pairwise comparison record."""
    va, vb = complex(va), complex(vb)
    if stderr is None:
        disc = abs(va - vb) / max(abs(vb), abs(va), 1e-300)
        return {"pair": f"{name_a}-{name_b}", "kind": "relative", "discrepancy": disc, "tolerance": rel_tol,
                "pass": bool(disc <= rel_tol), "asserted": asserted}
    diff = va - vb
    excess = max(abs(diff.real), abs(diff.imag)) - 1e-12 * max(abs(va), 1.0)
    disc = 0.0 if excess <= 0 else (excess / stderr if stderr > 0 else math.inf)
    return {"pair": f"{name_a}-{name_b}", "kind": "sigma", "discrepancy": disc, "tolerance": nsigma,
            "pass": bool(disc <= nsigma), "asserted": asserted}


def run(spec: ProblemSpec, mc_samples=None, seed=None):
    """Evaluate the requested routes; returns ``(report, exit_code)``."""
    n = spec.mc_samples if mc_samples is None else mc_samples
    sd = spec.seed if seed is None else seed
    report = {
        "integral": spec.integral,
        "N": spec.N,
        "parameters": {"alpha": spec.alpha, "beta": spec.beta, "sign": spec.sign, "b": spec.b},
        "normalization": spec.normalization,
        "routes": {},
        "checks": [],
        "errors": {},
        "provenance": {"seed": sd, "mc_samples": n, "version": VERSION},
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    try:
        spectra, mats = _problem_inputs(spec)
    except HaarintError as exc:
        report["errors"]["inputs"] = f"{type(exc).__name__}: {exc}"
        report["pass"] = False
        return _jsonable(report), 1
    if spectra is not None:
        report["spectra"] = [list(map(complex, s)) for s in spectra]
    results = {}
    for route in spec.routes:
        t0 = time.perf_counter()
        try:
            if route == "closed":
                r = _closed(spec, spectra)
                entry = {"value": complex(r.value), "diagnostics": r.diagnostics}
            elif route == "charsum":
                r = _charsum(spec, spectra)
                entry = {"value": complex(r.value), "diagnostics": r.diagnostics}
            else:
                r = _mc(spec, mats, n, sd)
                entry = {"value": complex(r.mean), "stderr": r.stderr, "n_samples": r.n_samples,
                         "method": r.method, "flags": list(r.flags)}
            results[route] = entry
            report["routes"][route] = entry
        except HaarintError as exc:
            report["errors"][route] = f"{type(exc).__name__}: {exc}"
        report.setdefault("timings", {})[route] = round(time.perf_counter() - t0, 3)
    names = [r for r in ROUTES if r in results]
    for i, ra in enumerate(names):
        for rb in names[i + 1:]:
            a, b = results[ra], results[rb]
            if rb == "mc":
                asserted = b["method"] == "mean"
                report["checks"].append(compare(ra, a["value"], rb, b["value"], stderr=b["stderr"],
                                                nsigma=spec.nsigma, asserted=asserted))
            else:
                report["checks"].append(compare(ra, a["value"], rb, b["value"], rel_tol=spec.rel_tol))
    ok = not report["errors"] and all(c["pass"] for c in report["checks"] if c["asserted"])
    report["pass"] = bool(ok)
    return _jsonable(report), (0 if ok else 1)


def run_file(path, mc_samples=None, seed=None):
    """Parse ``path`` and run it; spec errors give exit code 2."""
    try:
        with open(path) as fh:
            data = json.load(fh)
        spec = ProblemSpec.from_dict(data)
    except (OSError, json.JSONDecodeError, SpecError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}", "pass": False}, 2
    return run(spec, mc_samples, seed)


def to_json(report) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True)


def report_csv(report) -> str:
    """Flat table of route values and checks (or verify records)."""
    out = io.StringIO()
    w = csv.writer(out)
    w.writerow(["record", "name", "re", "im", "stderr", "discrepancy", "tolerance", "pass"])
    for name, r in report.get("routes", {}).items():
        w.writerow(["route", name, r["value"][0], r["value"][1], r.get("stderr", ""), "", "", ""])
    for c in report.get("checks", []):
        w.writerow(["check", c["pair"], "", "", "", c["discrepancy"], c["tolerance"], c["pass"]])
    for crit in report.get("criteria", []):
        for rec in crit["records"]:
            w.writerow([f"criterion {crit['number']}", rec["label"], "", "", "", rec["discrepancy"],
                        rec["tolerance"], rec["pass"]])
    return out.getvalue()
