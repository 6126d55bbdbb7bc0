"""Machine-checkable verification of the three guarantees.

Correctness is checked exhaustively over random trials.  System privacy is an
exact rank condition: the answers any E tapped databases emit in one round
must be a full-rank square image of that round's shared randomness, which
makes them a one-time pad of the message content.  User privacy is checked at
two levels: structural preconditions (every private mixing matrix invertible,
every column selection composed with its MDS factor invertible, so the
colluders' view is an invertible-matrix image of canonical columns) and a
Monte-Carlo comparison of the colluders' view distribution across desired
indices.  Every check has a sabotage mode acting as a negative control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .field import PrimeField
from .matrices import rank
from .params import SchemeParams, block_length, canonical_subsets, subset_plan
from .scheme import (Transcript, UserState, _mds, generate_session_reseeding,
                     randomness_rank_failures, run_retrieval)

_PROJECTION_SEED = 0x5EEDF00D
_projection_weights = np.empty(0, dtype=np.int64)


@dataclass
class CheckReport:
    check: str
    config: dict
    passed: bool
    details: dict

    def as_dict(self) -> dict:
        return {"check": self.check, "config": self.config,
                "pass": self.passed, "details": self.details}


@dataclass
class EavesdropView:
    """What a tap of E databases sees: their query rows and answers."""

    tap: tuple
    rows: list  # per tapped db: (rnd coefficient matrix, answers or None)


@dataclass
class CollusionView:
    """The query coefficient rows of T colluding databases, all rounds."""

    collusion: tuple
    msg: list   # per colluding db: (rows, K*L)
    rnd: list   # per colluding db: (rows, K*E*J)


def eavesdrop_view(transcript: Transcript, tap) -> EavesdropView:
    rows = [(transcript.databases[db].rnd, transcript.databases[db].answers) for db in tap]
    return EavesdropView(tap=tuple(tap), rows=rows)


def collusion_view(transcript: Transcript, t_set) -> CollusionView:
    t_set = tuple(sorted(t_set))
    return CollusionView(collusion=t_set,
                         msg=[transcript.databases[db].msg for db in t_set],
                         rnd=[transcript.databases[db].rnd for db in t_set])


# -- correctness ----------------------------------------------------------------


def verify_correctness(params: SchemeParams, trials: int, seed: int = 0,
                       sabotage: str = "none") -> CheckReport:
    """Fresh store, randomness, and user state per trial; exact recovery demanded."""
    passed = 0
    total = 0
    failures = []
    for desired in range(params.k):
        for i in range(trials):
            total += 1
            trial_seed = (seed * 1_000_003 + desired * 65_537 + i) & 0x7FFFFFFF
            try:
                result = run_retrieval(params, desired, seed=trial_seed, sabotage=sabotage)
                ok = result.correct
            except Exception as exc:  # decode failures count as trial failures
                ok = False
                failures.append({"desired": desired, "trial": i, "error": str(exc)})
            if ok:
                passed += 1
    return CheckReport(check="correctness",
                       config={**params.as_dict(), "trials": trials, "sabotage": sabotage},
                       passed=passed == total,
                       details={"passed": passed, "total": total,
                                "errors": failures[:5]})


# -- system privacy ---------------------------------------------------------------


def _rounds_from_support(transcript: Transcript, params: SchemeParams):
    """Attribute each row to the single randomness round it references.

    Honest transcripts pass the generation gate, which guarantees every row
    references exactly one round's block; anything else is reported as a
    structural failure by the rank check (row counts will not match).
    """
    ej = params.rand_per_round
    out = []
    for d in transcript.databases:
        rounds = []
        for i in range(d.rnd.shape[0]):
            nz = np.nonzero(d.rnd[i])[0]
            blocks = set((nz // ej).tolist()) if nz.size else set()
            rounds.append(blocks.pop() if len(blocks) == 1 else -1)
        out.append(rounds)
    return out


def transcript_system_privacy_failures(transcript: Transcript,
                                       params: SchemeParams) -> list:
    """Adversary-side check on one transcript: rows grouped by the randomness
    block they reference, then the per-(tap, round) rank condition."""
    return randomness_rank_failures(transcript, params,
                                    _rounds_from_support(transcript, params))


def verify_system_privacy(make_transcript, params: SchemeParams,
                          num_seeds: int = 20) -> CheckReport:
    """Run the rank condition on ``num_seeds`` generated transcripts.

    ``make_transcript(seed)`` must return a Transcript for the configuration.
    """
    failures = []
    for s in range(num_seeds):
        for f in transcript_system_privacy_failures(make_transcript(s), params):
            failures.append({**f, "seed": s, "tap": list(f["tap"])})
    return CheckReport(check="system-privacy",
                       config={**params.as_dict(), "seeds": num_seeds},
                       passed=not failures,
                       details={"failures": failures[:10], "num_failures": len(failures)})


def verify_system_privacy_config(params: SchemeParams, num_seeds: int = 20,
                                 sabotage: str = "none") -> CheckReport:
    """Convenience wrapper generating sessions internally, cycling the desired
    index across seeds."""

    def make(seed):
        _, transcript, _ = generate_session_reseeding(params, seed % params.k, seed, sabotage)
        return transcript

    report = verify_system_privacy(make, params, num_seeds)
    report.config["sabotage"] = sabotage
    return report


# -- user privacy: structural -----------------------------------------------------


def verify_user_privacy_structural(ustate: UserState, params: SchemeParams) -> CheckReport:
    """Certify the preconditions that make the colluders' view an invertible
    image of canonical columns: every mixing matrix full rank, and for every
    collusion set the selected MDS columns of every interference piece form an
    invertible square matrix."""
    f = PrimeField(params.q)
    n, k_files = params.n, params.k
    failures = []
    for (kk, r), mat in sorted(ustate.matrices.items()):
        if rank(f, mat) != params.nk:
            failures.append({"kind": "singular-matrix", "file": kk, "round": r})
    plan = subset_plan(params, ustate.desired)
    for t_set in combinations(range(n), params.t):
        for kk, blocks in plan.undesired.items():
            for sub, alpha, _c0, _c1, cwlen in blocks:
                head_chunk = alpha // n
                tail_len = cwlen - alpha
                tail_chunk = tail_len // n
                cols = [db * head_chunk + j for db in t_set for j in range(head_chunk)]
                cols += [alpha + db * tail_chunk + j for db in t_set for j in range(tail_chunk)]
                gen, _ = _mds(f, alpha, cwlen)
                sel = gen[:, cols]
                if sel.shape != (alpha, alpha) or rank(f, sel) != alpha:
                    failures.append({"kind": "selection-rank", "file": kk,
                                     "subset": list(sub), "collusion": list(t_set)})
    return CheckReport(check="user-privacy-structural",
                       config={**params.as_dict(), "desired": ustate.desired},
                       passed=not failures,
                       details={"failures": failures[:10], "num_failures": len(failures),
                                "matrices_checked": len(ustate.matrices)})


# -- user privacy: statistical ----------------------------------------------------


def _rand_run_of(params: SchemeParams, pos: int) -> int:
    for i, (lo, hi) in enumerate(params.rand_partition):
        if lo <= pos < hi:
            return i
    return -1


def collusion_features(view: CollusionView, params: SchemeParams) -> tuple:
    """Structural skeleton of a collusion view.

    Per row: which files contribute message coefficients, and which
    (round, partition-run) randomness groups are referenced.  Everything
    else is deliberately dropped. Coefficient values and symbol positions are
    uniformized by the user's private mixing and permutations, and per-file
    coefficient counts jitter by O(1/q) zero flukes; keeping any of them
    would wash the bucket distributions toward uniform and hide real leaks.
    Rows are sorted per database so the private row shuffle does not inject
    entropy either.
    """
    l_total = params.file_len
    ej = params.rand_per_round
    per_db = []
    for msg, rnd in zip(view.msg, view.rnd):
        rows = []
        for i in range(msg.shape[0]):
            files = sorted({int(col) // l_total for col in np.nonzero(msg[i])[0]})
            runs = sorted({(int(col) // ej, _rand_run_of(params, int(col) % ej))
                           for col in np.nonzero(rnd[i])[0]})
            rows.append((tuple(files), tuple(runs)))
        per_db.append(tuple(sorted(rows)))
    return tuple(per_db)


def project_features(features: tuple, projection_bits: int) -> int:
    """Fixed public random linear functional of the encoded features, bucketed
    into 2**projection_bits values."""
    global _projection_weights
    data = np.frombuffer(repr(features).encode(), dtype=np.uint8).astype(np.int64)
    if _projection_weights.shape[0] < data.shape[0]:
        rng = np.random.Generator(np.random.PCG64(_PROJECTION_SEED))
        _projection_weights = rng.integers(0, 1 << 20, size=max(4096, 2 * data.shape[0]),
                                           dtype=np.int64)
    w = _projection_weights[:data.shape[0]]
    return int(np.dot(w, data) % (1 << projection_bits))


def _pairwise_tv(counts: list, samples: int) -> list:
    out = []
    for a, b in combinations(range(len(counts)), 2):
        keys = set(counts[a]) | set(counts[b])
        tv = 0.5 * sum(abs(counts[a].get(x, 0) - counts[b].get(x, 0)) / samples for x in keys)
        out.append({"pair": [a, b], "tv": tv})
    return out


def verify_user_privacy_statistical(params: SchemeParams, t_set, samples: int,
                                    projection_bits: int = 8, tolerance: float = 0.05,
                                    seed: int = 0, sabotage: str = "none") -> CheckReport:
    """Empirically compare the colluders' view distribution across desired
    indices; pass iff every pairwise TV estimate stays within tolerance plus
    three sigma of multinomial sampling noise."""
    t_set = tuple(sorted(t_set))
    if len(t_set) != params.t:
        raise ValueError(f"collusion set {t_set} must have size T={params.t}")
    threshold = tolerance + 3.0 * math.sqrt((1 << projection_bits) / samples)
    counts = [dict() for _ in range(params.k)]
    for desired in range(params.k):
        for i in range(samples):
            session_seed = (seed * 2_000_003 + desired * 999_983 + i) & 0x7FFFFFFF
            _, transcript, _ = generate_session_reseeding(params, desired, session_seed, sabotage)
            bucket = project_features(
                collusion_features(collusion_view(transcript, t_set), params),
                projection_bits)
            counts[desired][bucket] = counts[desired].get(bucket, 0) + 1
    pairs = _pairwise_tv(counts, samples)
    worst = max((p["tv"] for p in pairs), default=0.0)
    return CheckReport(check="user-privacy-statistical",
                       config={**params.as_dict(), "t_set": list(t_set),
                               "samples": samples, "projection_bits": projection_bits,
                               "tolerance": tolerance, "sabotage": sabotage},
                       passed=worst <= threshold,
                       details={"pairwise_tv": pairs, "worst_tv": worst,
                                "threshold": threshold})


def run_all_checks(params: SchemeParams, trials: int = 20, num_seeds: int = 20,
                   samples: int = 4000, projection_bits: int = 8,
                   tolerance: float = 0.05, seed: int = 0,
                   sabotage: str = "none") -> list:
    """The full battery, as run by the command-line verifier."""
    reports = [verify_correctness(params, trials, seed=seed, sabotage=sabotage)]
    reports.append(verify_system_privacy_config(params, num_seeds, sabotage=sabotage))
    ustate, _, _ = generate_session_reseeding(params, 0, seed, sabotage)
    reports.append(verify_user_privacy_structural(ustate, params))
    t_set = tuple(range(params.t))
    reports.append(verify_user_privacy_statistical(
        params, t_set, samples, projection_bits, tolerance, seed=seed, sabotage=sabotage))
    return reports
