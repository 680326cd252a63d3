"""
Randomized coset method: grow a PA as a union of left cosets of a base group.

Each round, every worker stream draws a batch of candidates, which are scored
against the cosets committed at the start of the round. A single arbiter then
walks the candidates in (worker, index) order and re-checks each survivor
against the cosets committed during the round before accepting it, so the
output depends only on (base, config), never on process scheduling.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.distance import CosetDistance, DistanceReport, group_hd, pa_hd
from src.errors import BaseTooWeak, ClaimFailed, Exhausted, MalformedPA
from src.groups import MaterializedGroup
from src.pa_format import write_pa
from src.perm_array import PermArray, SearchCheckpoint, StreamState
from src.permutation import Permutation
from src.settings import get_settings

logger = logging.getLogger(__name__)

BATCH_SIZE = 256


class SearchConfig(BaseModel):
    d: int = Field(..., ge=2)
    seed: int = 0
    max_candidates: int = Field(1_000_000, ge=1)
    require_tight: bool = True
    checkpoint_every: int = Field(default_factory=lambda: get_settings().checkpoint_every, ge=1)
    workers: int = Field(default_factory=lambda: get_settings().workers, ge=1)
    max_cosets: Optional[int] = Field(None, ge=1)
    checkpoint_path: Optional[Path] = None


def _save_stream(rng: np.random.Generator) -> StreamState:
    s = rng.bit_generator.state
    return StreamState(
        state=hex(s["state"]["state"]), inc=hex(s["state"]["inc"]), has_uint32=s["has_uint32"], uinteger=s["uinteger"]
    )


def _load_stream(saved: StreamState) -> np.random.Generator:
    bitgen = np.random.PCG64()
    bitgen.state = {
        "bit_generator": "PCG64",
        "state": {"state": int(saved.state, 16), "inc": int(saved.inc, 16)},
        "has_uint32": saved.has_uint32,
        "uinteger": saved.uinteger,
    }
    return np.random.Generator(bitgen)


@dataclass
class SearchState:
    base: MaterializedGroup
    reps: List[Permutation]
    streams: List[np.random.Generator]
    candidates_tried: int = 0
    rejected_in_a_row: int = 0
    # stream states when the current round was drawn, and how many of its candidates are arbitrated
    round_states: List[StreamState] = field(default_factory=list)
    arbitrated: int = 0

    @classmethod
    def start(cls, base: MaterializedGroup, cfg: SearchConfig, reps: List[Permutation]) -> "SearchState":
        children = np.random.SeedSequence(cfg.seed).spawn(cfg.workers)
        state = cls(base=base, reps=list(reps), streams=[np.random.default_rng(s) for s in children])
        state.round_states = [_save_stream(rng) for rng in state.streams]
        return state

    @classmethod
    def resume(
        cls, base: MaterializedGroup, cfg: SearchConfig, reps: List[Permutation], checkpoint: SearchCheckpoint
    ) -> "SearchState":
        if len(checkpoint.streams) != cfg.workers:
            raise MalformedPA(f"search state has {len(checkpoint.streams)} streams but workers={cfg.workers}")
        return cls(
            base=base,
            reps=list(reps),
            streams=[_load_stream(s) for s in checkpoint.streams],
            candidates_tried=checkpoint.tried,
            rejected_in_a_row=checkpoint.streak,
            round_states=list(checkpoint.streams),
            arbitrated=checkpoint.offset,
        )

    def begin_round(self) -> None:
        """Snapshot the streams before drawing; a resumed first round keeps its offset."""
        if self.arbitrated >= len(self.streams) * BATCH_SIZE:
            self.arbitrated = 0
        self.round_states = [_save_stream(rng) for rng in self.streams]

    def checkpoint(self) -> SearchCheckpoint:
        if self.arbitrated >= len(self.streams) * BATCH_SIZE:
            streams, offset = [_save_stream(rng) for rng in self.streams], 0
        else:
            streams, offset = self.round_states, self.arbitrated
        return SearchCheckpoint(
            tried=self.candidates_tried, streak=self.rejected_in_a_row, offset=offset, streams=streams
        )

    def as_pa(self, cfg: SearchConfig) -> PermArray:
        note = f"coset search, {self.candidates_tried} candidates"
        return PermArray(self.base, self.reps, d=cfg.d, seed=cfg.seed, note=note, search=self.checkpoint())


def random_permutation(rng: np.random.Generator, n: int) -> Permutation:
    """Uniform over S_n; numpy's shuffle is unbiased and reproducible per seed."""
    return Permutation.trusted(rng.permutation(n).tolist())


# --- candidate scoring (runs in worker processes when workers > 1) ---

_ORACLE: Optional[CosetDistance] = None


def _init_worker(base: MaterializedGroup) -> None:
    global _ORACLE
    _ORACLE = CosetDistance(base)


def _coset_distances(oracle: CosetDistance, candidates: np.ndarray, reps: np.ndarray) -> np.ndarray:
    """(candidates x reps) matrix of hd(candidate, rep * G) = hd(rep^-1 candidate, G)."""
    inv = np.argsort(reps, axis=1)
    count, k = len(candidates), len(reps)
    shifted = candidates[:, inv].reshape(count * k, -1)
    mins, _ = oracle.distances(shifted)
    return mins.reshape(count, k)


def _score_batch(candidates: np.ndarray, reps: np.ndarray) -> np.ndarray:
    return _coset_distances(_ORACLE, candidates, reps)


def _passes(distances: np.ndarray, d: int, tight: bool) -> bool:
    if distances.min() < d:
        return False
    return not tight or bool((distances == d).any())


def coset_search(
    base: MaterializedGroup, cfg: SearchConfig, resume_from: Optional[PermArray] = None
) -> PermArray:
    n = base.degree
    base_hd = group_hd(base).min_distance if base.order > 1 else n
    if base_hd < cfg.d:
        logger.error(f"{base.descriptor.to_text()} has hd {base_hd} < {cfg.d}")
        raise BaseTooWeak(base_hd, cfg.d)

    state = SearchState.start(base, cfg, [Permutation.identity(n)])
    if resume_from is not None:
        if resume_from.base.descriptor != base.descriptor:
            raise MalformedPA("resume file uses a different base group")
        verify_search_output(resume_from, claimed=cfg.d)
        if resume_from.search is None:
            logger.warning("resume file carries no search state; streams restart from the seed")
            state = SearchState.start(base, cfg, resume_from.reps)
        elif resume_from.seed != cfg.seed:
            raise MalformedPA(f"resume file was searched with seed {resume_from.seed}, not {cfg.seed}")
        else:
            state = SearchState.resume(base, cfg, resume_from.reps, resume_from.search)
    start_count = len(state.reps)

    oracle = CosetDistance(base)
    logger.info(
        f"search on {base.descriptor.to_text()}: d={cfg.d} seed={cfg.seed} workers={cfg.workers} "
        f"tight={cfg.require_tight} method={oracle.method}"
    )
    pool = ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(base,)) if cfg.workers > 1 else None
    next_checkpoint = (state.candidates_tried // cfg.checkpoint_every + 1) * cfg.checkpoint_every
    try:
        while not _done(state, cfg):
            state.begin_round()
            batches = [
                np.asarray([random_permutation(rng, n).images for _ in range(BATCH_SIZE)], dtype=np.int64)
                for rng in state.streams
            ]
            committed = np.asarray([r.images for r in state.reps], dtype=np.int64)
            if pool is None:
                scores = [_coset_distances(oracle, b, committed) for b in batches]
            else:
                scores = list(pool.map(_score_batch, batches, [committed] * len(batches)))
            _arbitrate(state, cfg, oracle, batches, scores)
            if state.candidates_tried >= next_checkpoint:
                _checkpoint(state, cfg)
                next_checkpoint = (state.candidates_tried // cfg.checkpoint_every + 1) * cfg.checkpoint_every
    finally:
        if pool is not None:
            pool.shutdown()

    _checkpoint(state, cfg)
    pa = state.as_pa(cfg)
    if len(state.reps) == start_count and not _at_coset_limit(state, cfg):
        logger.warning(f"no coset added after {state.candidates_tried} candidates")
        raise Exhausted(state.candidates_tried, pa)
    return pa


def _at_coset_limit(state: SearchState, cfg: SearchConfig) -> bool:
    return cfg.max_cosets is not None and len(state.reps) >= cfg.max_cosets


def _done(state: SearchState, cfg: SearchConfig) -> bool:
    return state.rejected_in_a_row >= cfg.max_candidates or _at_coset_limit(state, cfg)


def _arbitrate(
    state: SearchState,
    cfg: SearchConfig,
    oracle: CosetDistance,
    batches: List[np.ndarray],
    scores: List[np.ndarray],
) -> None:
    """
    Commit survivors in (worker, index) order, re-checking against this round's
    additions. Candidates before state.arbitrated were settled before a resume.
    """
    round_start = len(state.reps)
    ordered = [(row, distances) for batch, score in zip(batches, scores) for row, distances in zip(batch, score)]
    for row, distances in ordered[state.arbitrated:]:
        if _done(state, cfg):
            return
        state.arbitrated += 1
        state.candidates_tried += 1
        ok = _passes(distances, cfg.d, cfg.require_tight)
        if ok and len(state.reps) > round_start:
            fresh = np.asarray([r.images for r in state.reps[round_start:]], dtype=np.int64)
            late = _coset_distances(oracle, row[None, :], fresh)[0]
            all_distances = np.concatenate([distances, late])
            ok = _passes(all_distances, cfg.d, cfg.require_tight)
        if ok:
            state.reps.append(Permutation.trusted(row.tolist()))
            state.rejected_in_a_row = 0
            logger.debug(f"coset {len(state.reps) - 1} accepted after {state.candidates_tried} candidates")
        else:
            state.rejected_in_a_row += 1


def _checkpoint(state: SearchState, cfg: SearchConfig) -> None:
    k = len(state.reps)
    logger.info(f"cosets={k} size={k * state.base.order} tried={state.candidates_tried}")
    if cfg.checkpoint_path is not None:
        write_pa(state.as_pa(cfg), cfg.checkpoint_path)


def verify_search_output(pa: PermArray, claimed: Optional[int] = None, workers: Optional[int] = None) -> DistanceReport:
    """
    Independent re-verification: coset-shortcut always, plus a full pairwise scan
    when the PA is small enough. Raises ClaimFailed if the claimed d does not hold.
    """
    claimed = pa.d if claimed is None else claimed
    report = pa_hd(pa, "coset-shortcut")
    if report.method != "pairwise" and pa.size <= get_settings().verify_cap:
        exact = pa_hd(pa, "exact-pairwise", workers)
        if exact.min_distance != report.min_distance:
            logger.error(f"coset-shortcut hd={report.min_distance} disagrees with pairwise hd={exact.min_distance}")
        if exact.min_distance <= report.min_distance:
            report = exact
    if claimed is not None and report.min_distance < claimed:
        logger.error(f"claim d={claimed} failed: {report.render()}")
        raise ClaimFailed(claimed, report)
    logger.info(f"verified n={pa.n} d={report.min_distance} size={pa.size}")
    return report
