"""The end-to-end retrieval engine.

A session proceeds in K rounds.  In round r every file k is first folded with
that round's shared randomness through one slot of the index partition (the
slot rotates with the round, so over K rounds each file visits every slot),
then mixed by a private invertible matrix.  The desired file's mixed vector is
downloaded in full across subset-labeled blocks; every other file is squeezed
through per-subset MDS expansions so that its unknown tail symbols can be
re-derived from the downloaded head symbols and cancelled.  Queries are
materialized as explicit linear-coefficient rows over the global message and
randomness symbol spaces, which is what the databases evaluate and what the
privacy verifiers inspect.

A separate, much simpler scheme covers the all-collude case T = N, where the
only possible defense is to download everything under an MDS one-time pad.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .field import PrimeField, next_prime
from .matrices import SingularMatrix, invert, master_matrix, mds_generator, rank, sample_invertible
from .params import (InvalidParameters, SchemeParams, SubsetPlan, block_length,
                     canonical_subsets, subset_plan)


class SchemeError(Exception):
    pass


class DimensionMismatch(SchemeError):
    pass


class DecodeFailure(SchemeError):
    """A square system in decoding was singular; the transcript is corrupt."""


SABOTAGE_MODES = ("none", "no-rotation", "zero-randomness", "singular-s", "no-cancel")

# Independent seed streams, split so a verifier can regenerate any one of them.
STREAM_MESSAGES = 0
STREAM_COMMON = 1
STREAM_USER = 2

_MAX_GATE_ATTEMPTS = 16


def stream_rng(seed: int, stream: int, *extra: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(stream,) + tuple(int(x) for x in extra))
    return np.random.Generator(np.random.PCG64(ss))


# Master matrices, their inverses, and MDS pieces are pure functions of the
# parameters, so they are cached across sessions.
_MASTER_CACHE: dict = {}
_MDS_CACHE: dict = {}


def _master(field: PrimeField, size: int):
    key = (field.q, size)
    if key not in _MASTER_CACHE:
        g = master_matrix(field, size)
        gi = invert(field, g)
        g.flags.writeable = False
        gi.flags.writeable = False
        _MASTER_CACHE[key] = (g, gi)
    return _MASTER_CACHE[key]


def _mds(field: PrimeField, dim: int, length: int):
    key = (field.q, dim, length)
    if key not in _MDS_CACHE:
        gen = mds_generator(dim, length, field)
        head_inv = invert(field, gen[:, :dim])
        gen.flags.writeable = False
        head_inv.flags.writeable = False
        _MDS_CACHE[key] = (gen, head_inv)
    return _MDS_CACHE[key]


@dataclass
class MessageStore:
    """The K stored files, each a row of L field symbols."""

    field: PrimeField
    symbols: np.ndarray  # (K, L)

    @classmethod
    def random(cls, params: SchemeParams, rng: np.random.Generator) -> "MessageStore":
        f = PrimeField(params.q)
        return cls(field=f, symbols=f.random_array(rng, (params.k, params.file_len)))

    def validate(self, params: SchemeParams):
        if self.symbols.shape != (params.k, params.file_len):
            raise DimensionMismatch(
                f"store shape {self.symbols.shape} != {(params.k, params.file_len)}")


@dataclass
class CommonRandomness:
    """K rounds of E*J shared symbols, known to the databases only."""

    field: PrimeField
    symbols: np.ndarray  # (K, E*J)

    @classmethod
    def random(cls, params: SchemeParams, rng: np.random.Generator) -> "CommonRandomness":
        f = PrimeField(params.q)
        return cls(field=f, symbols=f.random_array(rng, (params.k, params.rand_per_round)))


@dataclass
class UserState:
    """Everything the user generated privately for one session.

    Besides the K*K mixing matrices this records the relabelings that hide the
    desired index: per-file symbol permutations, the order in which the logical
    rounds are played, and each database's row shuffle.  ``block_rows`` maps a
    (round, subset) block to the transcript rows holding it, which is what the
    decoder walks.
    """

    desired: int
    matrices: dict
    msg_perms: list
    round_perm: np.ndarray
    row_perms: list
    salt: bytes
    block_rows: dict = dc_field(default_factory=dict)
    row_origin: list = dc_field(default_factory=list)

    def commitment(self) -> str:
        return hashlib.sha256(f"{self.desired}|{self.salt.hex()}".encode()).hexdigest()


@dataclass
class LinearQuery:
    """One answer symbol: sparse coefficients over message and randomness symbols."""

    msg_coeffs: list
    rand_coeffs: list
    answer: Optional[int]


@dataclass
class DatabaseRows:
    msg: np.ndarray            # (rows, K*L)
    rnd: np.ndarray            # (rows, K*E*J)
    answers: Optional[np.ndarray]


@dataclass
class Transcript:
    """Per-database query rows and answers, plus public metadata."""

    params: dict
    kind: str
    commitment: str
    databases: list

    def row(self, db: int, i: int) -> LinearQuery:
        d = self.databases[db]
        mrow = d.msg[i]
        rrow = d.rnd[i]
        msg = [(int(j), int(mrow[j])) for j in np.nonzero(mrow)[0]]
        rnd = [(int(j), int(rrow[j])) for j in np.nonzero(rrow)[0]]
        ans = None if d.answers is None else int(d.answers[i])
        return LinearQuery(msg_coeffs=msg, rand_coeffs=rnd, answer=ans)

    @property
    def total_answers(self) -> int:
        return sum(d.msg.shape[0] for d in self.databases)


def _slot(params: SchemeParams, k: int, r: int, desired: int, sabotage: str) -> int:
    # The sabotage freezes every undesired file in slot 0; the desired file
    # keeps rotating (it has to, or nothing could be decoded), which is exactly
    # the index leak the statistical verifier must catch.
    if sabotage == "no-rotation" and k != desired:
        return 0
    return params.slot_for(k, r)


def sample_user_state(params: SchemeParams, desired: int, rng: np.random.Generator,
                      sabotage: str = "none") -> UserState:
    f = PrimeField(params.q)
    nk = params.nk
    matrices = {}
    for k in range(params.k):
        for r in range(params.k):
            matrices[(k, r)] = sample_invertible(nk, f, rng)
    if sabotage == "singular-s":
        bad = matrices[(0, 0)].copy()
        bad[1] = bad[0]
        matrices[(0, 0)] = bad
    msg_perms = [rng.permutation(params.file_len) for _ in range(params.k)]
    round_perm = rng.permutation(params.k)
    row_perms = [rng.permutation(params.k * params.j) for _ in range(params.n)]
    salt = rng.integers(0, 256, size=16, dtype=np.uint8).tobytes()
    return UserState(desired=desired, matrices=matrices, msg_perms=msg_perms,
                     round_perm=round_perm, row_perms=row_perms, salt=salt)


def build_round_vector(params: SchemeParams, k: int, r: int, w_k: np.ndarray,
                       s_round: np.ndarray) -> np.ndarray:
    """Length-N**K symbol vector for file k in round r (all 0-based).

    Folds the slot's message slice through the top rows of the master matrix
    and the slot's randomness slice through the bottom rows.
    """
    f = PrimeField(params.q)
    if w_k.shape != (params.file_len,):
        raise DimensionMismatch(f"file vector has shape {w_k.shape}")
    if s_round.shape != (params.rand_per_round,):
        raise DimensionMismatch(f"randomness vector has shape {s_round.shape}")
    g, _ = _master(f, params.nk)
    m = params.slot_for(k, r)
    wlo, whi = params.msg_slot(m)
    slo, shi = params.rand_slot(m)
    stacked = np.concatenate([w_k[wlo:whi], s_round[slo:shi]])
    return f.matmul(stacked[None, :], g)[0]


def encode_desired(v: np.ndarray, mix: np.ndarray, plan: SubsetPlan,
                   field: PrimeField) -> dict:
    """Split V @ S into labeled blocks in canonical family order."""
    x = field.matmul(v[None, :], mix)[0]
    return {sub: x[off:off + ln] for sub, off, ln in plan.desired_blocks}


def encode_undesired(v: np.ndarray, mix: np.ndarray, plan: SubsetPlan, k: int,
                     field: PrimeField, params: SchemeParams) -> dict:
    """Per-subset MDS expansions of V @ S[:, :T*N**(K-1)] for an undesired file."""
    tn1 = params.t * params.n ** (params.k - 1)
    base = field.matmul(v[None, :], mix[:, :tn1])[0]
    out = {}
    for sub, alpha, c0, c1, cwlen in plan.undesired[k]:
        gen, _ = _mds(field, alpha, cwlen)
        cw = field.matmul(base[None, c0:c1], gen)[0]
        out[sub] = cw[:alpha]
        out[tuple(sorted(sub + (plan.desired_index,)))] = cw[alpha:]
    return out


class IndivisibleBlock(SchemeError):
    pass


def _build_queries(params: SchemeParams, plan: SubsetPlan, ustate: UserState,
                   sabotage: str) -> list:
    """Assemble per-database coefficient rows for all K rounds.

    Returns the list of DatabaseRows (answers unset) and fills in
    ``ustate.block_rows`` / ``ustate.row_origin``.
    """
    f = PrimeField(params.q)
    n, k_files, q = params.n, params.k, params.q
    nk, l_total, ej = params.nk, params.file_len, params.rand_per_round
    tn1 = params.t * n ** (k_files - 1)
    g, _ = _master(f, nk)
    subsets = canonical_subsets(k_files)
    desired = ustate.desired

    pre_msg = [[] for _ in range(n)]
    pre_rnd = [[] for _ in range(n)]
    pre_origin = [[] for _ in range(n)]
    block_pre_rows = {}

    for t_phys in range(k_files):
        r = int(ustate.round_perm[t_phys])
        # Coefficient columns of every file's encoded vector, over the file's
        # compact [message slice ; randomness slice] basis.
        contrib = {kk: {} for kk in range(k_files)}
        slots = {}
        for kk in range(k_files):
            m = _slot(params, kk, r, desired, sabotage)
            slots[kk] = m
            mix = ustate.matrices[(kk, r)]
            if kk == desired:
                p = f.matmul(g, mix)
                for sub, off, ln in plan.desired_blocks:
                    contrib[kk][sub] = p[:, off:off + ln]
            else:
                base = f.matmul(g, mix[:, :tn1])
                for sub, alpha, c0, c1, cwlen in plan.undesired[kk]:
                    gen, _ = _mds(f, alpha, cwlen)
                    cw = f.matmul(base[:, c0:c1], gen)
                    contrib[kk][sub] = cw[:, :alpha]
                    contrib[kk][tuple(sorted(sub + (desired,)))] = cw[:, alpha:]

        for sub in subsets:
            beta = block_length(n, k_files, params.t, len(sub))
            if beta % n:
                raise IndivisibleBlock(f"block {sub} of length {beta} is not divisible by N={n}")
            bmsg = np.zeros((beta, k_files * l_total), dtype=np.int64)
            brnd = np.zeros((beta, k_files * ej), dtype=np.int64)
            for kk in sub:
                c = contrib[kk][sub]
                m = slots[kk]
                wlo, whi = params.msg_slot(m)
                slo, shi = params.rand_slot(m)
                wm = whi - wlo
                targets = kk * l_total + ustate.msg_perms[kk][wlo:whi]
                bmsg[:, targets] = (bmsg[:, targets] + c[:wm].T) % q
                if sabotage != "zero-randomness":
                    rtargets = r * ej + np.arange(slo, shi)
                    brnd[:, rtargets] = (brnd[:, rtargets] + c[wm:].T) % q
            chunk = beta // n
            rows = []
            for db in range(n):
                start = db * chunk
                base_idx = len(pre_msg[db])
                pre_msg[db].append(bmsg[start:start + chunk])
                pre_rnd[db].append(brnd[start:start + chunk])
                pre_origin[db].extend((r, sub) for _ in range(chunk))
                rows.extend((db, base_idx, j) for j in range(chunk))
            block_pre_rows[(r, sub)] = rows

    databases = []
    ustate.block_rows = {}
    ustate.row_origin = []
    chunk_offsets = []
    inverse_perms = []
    for db in range(n):
        msg = np.vstack(pre_msg[db])
        rnd = np.vstack(pre_rnd[db])
        chunk_offsets.append(np.cumsum([0] + [c.shape[0] for c in pre_msg[db]]))
        rp = ustate.row_perms[db]
        inverse_perms.append(np.argsort(rp))
        databases.append(DatabaseRows(msg=msg[rp], rnd=rnd[rp], answers=None))
        ustate.row_origin.append([pre_origin[db][rp[i]] for i in range(len(rp))])
    for key, rows in block_pre_rows.items():
        final = []
        for db, base_idx, j in rows:
            pre_index = int(chunk_offsets[db][base_idx]) + j
            final.append((db, int(inverse_perms[db][pre_index])))
        ustate.block_rows[key] = final
    return databases


def assemble_queries(params: SchemeParams, desired: int, ustate: UserState,
                     sabotage: str = "none") -> Transcript:
    """Build the query side of a transcript (answers unset)."""
    plan = subset_plan(params, desired)
    databases = _build_queries(params, plan, ustate, sabotage)
    return Transcript(params=params.as_dict(), kind="general",
                      commitment=ustate.commitment(), databases=databases)


def answer(transcript: Transcript, store: MessageStore,
           randomness: CommonRandomness) -> Transcript:
    """Fill in every database's answers from its coefficient rows alone."""
    f = store.field
    w_flat = store.symbols.reshape(-1, 1)
    s_flat = randomness.symbols.reshape(-1, 1)
    for d in transcript.databases:
        if d.msg.shape[1] != w_flat.shape[0] or d.rnd.shape[1] != s_flat.shape[0]:
            raise DimensionMismatch(
                f"coefficient widths {(d.msg.shape[1], d.rnd.shape[1])} do not match "
                f"store sizes {(w_flat.shape[0], s_flat.shape[0])}")
        vals = (f.matmul(d.msg, w_flat) + f.matmul(d.rnd, s_flat)) % f.q
        d.answers = vals[:, 0]
    return transcript


def decode(transcript: Transcript, ustate: UserState, params: SchemeParams,
           plan: SubsetPlan, sabotage: str = "none") -> np.ndarray:
    """Recover the desired file from the answers.

    Per round: extend every pure interference block through its MDS code,
    subtract the extensions from the mixed blocks, unmix the desired vector,
    and invert the master matrix to read off one message slice.
    """
    f = PrimeField(params.q)
    n, k_files, q = params.n, params.k, params.q
    g, g_inv = _master(f, params.nk)
    desired = ustate.desired
    answers = [d.answers for d in transcript.databases]
    if any(a is None for a in answers):
        raise DecodeFailure("transcript has no answers")
    logical = np.zeros(params.file_len, dtype=np.int64)
    try:
        for r in range(k_files):
            vals = {}
            for sub in canonical_subsets(k_files):
                rows = ustate.block_rows[(r, sub)]
                vals[sub] = np.array([answers[db][i] for db, i in rows], dtype=np.int64)
            interference = {}
            for sub in canonical_subsets(k_files):
                if desired in sub:
                    continue
                alpha = block_length(n, k_files, params.t, len(sub))
                cwlen = n * alpha // params.t
                gen, head_inv = _mds(f, alpha, cwlen)
                head = f.matmul(vals[sub][None, :], head_inv)
                tail = f.matmul(head, gen[:, alpha:])[0]
                interference[tuple(sorted(sub + (desired,)))] = tail
            x = np.zeros(params.nk, dtype=np.int64)
            for sub, off, ln in plan.desired_blocks:
                v = vals[sub]
                if len(sub) > 1 and sabotage != "no-cancel":
                    v = (v - interference[sub]) % q
                x[off:off + ln] = v
            mix_inv = invert(f, ustate.matrices[(desired, r)])
            v_vec = f.matmul(x[None, :], mix_inv)
            ws = f.matmul(v_vec, g_inv)[0]
            m = params.slot_for(desired, r)
            wlo, whi = params.msg_slot(m)
            logical[wlo:whi] = ws[:whi - wlo]
    except SingularMatrix as exc:
        raise DecodeFailure(str(exc)) from exc
    out = np.zeros(params.file_len, dtype=np.int64)
    out[ustate.msg_perms[desired]] = logical
    return out


def randomness_rank_failures(transcript: Transcript, params: SchemeParams,
                             round_of_row: list) -> list:
    """Rank check behind system privacy: for every tap set and round, the
    eavesdropped rows restricted to that round's randomness must form a
    full-rank square system.  ``round_of_row[db][i]`` attributes rows to
    rounds."""
    f = PrimeField(params.q)
    ej = params.rand_per_round
    failures = []
    for tap in combinations(range(params.n), params.e):
        for r in range(params.k):
            rows = []
            for db in tap:
                d = transcript.databases[db]
                rows.extend(d.rnd[i, r * ej:(r + 1) * ej]
                            for i in range(d.rnd.shape[0]) if round_of_row[db][i] == r)
            mat = np.array(rows, dtype=np.int64)
            if mat.shape != (ej, ej):
                failures.append({"tap": tap, "round": r, "reason": "row-count",
                                 "rows": mat.shape[0]})
                continue
            got = rank(f, mat)
            if got != ej:
                failures.append({"tap": tap, "round": r, "reason": "rank",
                                 "rank": got, "expected": ej})
    return failures


def _gate_rounds(ustate: UserState) -> list:
    return [[origin[0] for origin in per_db] for per_db in ustate.row_origin]


def generate_session(params: SchemeParams, desired: int, seed: int,
                     sabotage: str = "none") -> tuple:
    """Sample a user state and build the query side, resampling user matrices
    until the internal system-privacy rank check passes.

    At the default (small) field sizes any single rank check fails with
    probability about 2/q, so resampling is targeted: only the mixing
    matrices of rounds with a failing check are redrawn each retry.
    Sabotaged sessions skip the gate, since some sabotages can never pass it.
    """
    if sabotage not in SABOTAGE_MODES:
        raise InvalidParameters(f"unknown sabotage mode {sabotage!r}")
    if params.t >= params.n:
        raise InvalidParameters("the general engine requires T < N; use the all-collude scheme")
    if not 0 <= desired < params.k:
        raise InvalidParameters(f"desired index {desired} out of range")
    f = PrimeField(params.q)
    ustate = sample_user_state(params, desired, stream_rng(seed, STREAM_USER, 0), sabotage)
    transcript = assemble_queries(params, desired, ustate, sabotage)
    if sabotage != "none":
        return ustate, transcript, 1
    failures = randomness_rank_failures(transcript, params, _gate_rounds(ustate))
    attempts = 1
    while failures:
        if attempts >= _MAX_GATE_ATTEMPTS:
            raise SchemeError(
                f"system-privacy precheck still failing after {attempts} resamples")
        retry_rng = stream_rng(seed, STREAM_USER, attempts)
        for r in sorted({fail["round"] for fail in failures}):
            for k in range(params.k):
                ustate.matrices[(k, r)] = sample_invertible(params.nk, f, retry_rng)
        transcript = assemble_queries(params, desired, ustate, sabotage)
        failures = randomness_rank_failures(transcript, params, _gate_rounds(ustate))
        attempts += 1
    return ustate, transcript, attempts


def generate_session_reseeding(params: SchemeParams, desired: int, seed: int,
                               sabotage: str = "none", max_reseeds: int = 8) -> tuple:
    """generate_session, redrawing the session seed in the rare case the
    resample budget is exhausted.  The reseed event does not depend on the
    desired index, so callers comparing view distributions stay unbiased."""
    last = None
    for i in range(max_reseeds):
        try:
            return generate_session(params, desired, seed + i * 0x9E3779B1, sabotage)
        except SchemeError as exc:
            last = exc
    raise SchemeError(f"no viable session after {max_reseeds} reseeds: {last}")


@dataclass
class RetrievalResult:
    params: SchemeParams
    transcript: Transcript
    user_state: UserState
    store: MessageStore
    randomness: CommonRandomness
    recovered: np.ndarray
    rate: Fraction
    secrecy_used: Fraction
    attempts: int

    @property
    def correct(self) -> bool:
        return bool(np.array_equal(self.recovered, self.store.symbols[self.user_state.desired]))


def run_retrieval(params: SchemeParams, desired: int, store: Optional[MessageStore] = None,
                  seed: int = 0, sabotage: str = "none") -> RetrievalResult:
    """Full pipeline: queries, answers, decode, and the achieved rate."""
    if store is None:
        store = MessageStore.random(params, stream_rng(seed, STREAM_MESSAGES))
    store.validate(params)
    randomness = CommonRandomness.random(params, stream_rng(seed, STREAM_COMMON))
    ustate, transcript, attempts = generate_session_reseeding(params, desired, seed, sabotage)
    answer(transcript, store, randomness)
    plan = subset_plan(params, desired)
    recovered = decode(transcript, ustate, params, plan, sabotage)
    return RetrievalResult(params=params, transcript=transcript, user_state=ustate,
                           store=store, randomness=randomness, recovered=recovered,
                           rate=params.rate, secrecy_used=params.secrecy_used,
                           attempts=attempts)


# -- all-collude scheme (T = N) ------------------------------------------------


@dataclass
class AllColludeResult:
    n: int
    k: int
    e: int
    q: int
    transcript: Transcript
    store: np.ndarray        # (K, N-E)
    recovered: np.ndarray    # (K, N-E), the user decodes every file
    rate: Fraction

    @property
    def correct(self) -> bool:
        return bool(np.array_equal(self.recovered, self.store))


def run_all_collude(n: int, k: int, e: int, desired: int = 0,
                    store: Optional[np.ndarray] = None, seed: int = 0,
                    q_hint: Optional[int] = None) -> AllColludeResult:
    """Retrieval when all N databases collude (T = N, E < N).

    Each file shrinks to N - E symbols.  The databases derive an MDS-spread
    one-time pad from K*E shared symbols, pad [0..0, W_k] with it, and the
    user downloads every file's padded vector, strips the pad from its zero
    prefix, and recovers all K files.  Rate (N - E)/(N*K).
    """
    if k < 1 or n < 1:
        raise InvalidParameters(f"need N >= 1 and K >= 1, got N={n} K={k}")
    if not 0 <= e < n:
        raise InvalidParameters(f"all-collude scheme needs 0 <= E < N, got E={e} N={n}")
    if not 0 <= desired < k:
        raise InvalidParameters(f"desired index {desired} out of range")
    q = q_hint if q_hint is not None else next_prime(n + 1)
    f = PrimeField(q)
    if q < n + 1:
        raise InvalidParameters(f"q={q} too small for {n} mask positions")
    l_len = n - e
    if store is None:
        store = f.random_array(stream_rng(seed, STREAM_MESSAGES), (k, l_len))
    if store.shape != (k, l_len):
        raise DimensionMismatch(f"store shape {store.shape} != {(k, l_len)}")

    secrets = f.random_array(stream_rng(seed, STREAM_COMMON), (k, e))
    if e:
        gmask = mds_generator(e, n, f)
        pad = f.matmul(secrets, gmask)
    else:
        gmask = f.zeros((0, n))
        pad = f.zeros((k, n))
    padded = np.hstack([f.zeros((k, e)), store])
    answers = (padded + pad) % q

    databases = []
    for db in range(n):
        msg = np.zeros((k, k * l_len), dtype=np.int64)
        rnd = np.zeros((k, k * e), dtype=np.int64)
        for kk in range(k):
            if db >= e:
                msg[kk, kk * l_len + (db - e)] = 1
            if e:
                rnd[kk, kk * e:(kk + 1) * e] = gmask[:, db]
        databases.append(DatabaseRows(msg=msg, rnd=rnd, answers=answers[:, db].copy()))

    salt = stream_rng(seed, STREAM_USER).integers(0, 256, size=16, dtype=np.uint8).tobytes()
    commitment = hashlib.sha256(f"{desired}|{salt.hex()}".encode()).hexdigest()
    transcript = Transcript(params={"n": n, "k": k, "t": n, "e": e, "q": q},
                            kind="all-collude", commitment=commitment,
                            databases=databases)

    received = np.stack([np.array([transcript.databases[db].answers[kk] for db in range(n)])
                         for kk in range(k)])
    if e:
        head_inv = invert(f, gmask[:, :e])
        sec = f.matmul(received[:, :e], head_inv)
        full_pad = f.matmul(sec, gmask)
        recovered = (received - full_pad)[:, e:] % q
    else:
        recovered = received % q
    return AllColludeResult(n=n, k=k, e=e, q=q, transcript=transcript, store=store,
                            recovered=recovered, rate=Fraction(n - e, n * k))


# -- transcript serialization --------------------------------------------------


def transcript_to_json(transcript: Transcript) -> str:
    """Deterministic JSON: stable key order, sparse coefficient pairs,
    field elements as decimal integers, LF line endings."""
    dbs = []
    for d in transcript.databases:
        rows = []
        for i in range(d.msg.shape[0]):
            mrow, rrow = d.msg[i], d.rnd[i]
            rows.append({
                "msg_coeffs": [[int(j), int(mrow[j])] for j in np.nonzero(mrow)[0]],
                "rand_coeffs": [[int(j), int(rrow[j])] for j in np.nonzero(rrow)[0]],
                "answer": None if d.answers is None else int(d.answers[i]),
            })
        dbs.append({"rows": rows})
    payload = {
        "params": transcript.params,
        "kind": transcript.kind,
        "desired_index_commitment": transcript.commitment,
        "databases": dbs,
    }
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def transcript_from_json(text: str) -> Transcript:
    payload = json.loads(text)
    p = payload["params"]
    if payload["kind"] == "general":
        from .params import derive
        sp = derive(p["n"], p["k"], p["t"], p["e"], q_hint=p["q"])
        msg_w = p["k"] * sp.file_len
        rnd_w = p["k"] * sp.rand_per_round
    else:
        msg_w = p["k"] * (p["n"] - p["e"])
        rnd_w = p["k"] * p["e"]
    dbs = []
    for d in payload["databases"]:
        rows = d["rows"]
        msg = np.zeros((len(rows), msg_w), dtype=np.int64)
        rnd = np.zeros((len(rows), rnd_w), dtype=np.int64)
        answers = np.zeros(len(rows), dtype=np.int64)
        has_answers = True
        for i, row in enumerate(rows):
            for j, v in row["msg_coeffs"]:
                msg[i, j] = v
            for j, v in row["rand_coeffs"]:
                rnd[i, j] = v
            if row["answer"] is None:
                has_answers = False
            else:
                answers[i] = row["answer"]
        dbs.append(DatabaseRows(msg=msg, rnd=rnd, answers=answers if has_answers else None))
    return Transcript(params=p, kind=payload["kind"],
                      commitment=payload["desired_index_commitment"], databases=dbs)
