"""
Exhaustive feasibility search for perfect cyclic IA.

The search space is normalized in two ways only:

    channel      every row of D scaled so the diagonal is x^0
    parameters   one global shift so that p_11 = 0

Both leave every separability condition unchanged (each condition compares
two offsets of one receiver row, or two offsets of one transmitter).
Per-transmitter shifts are not symmetries and are not assumed.

For every normalized channel the remaining parameters are assigned
transmitter-major by depth-first search. Each condition is compiled to a
rule "p[later] != p[earlier] + delta" so that every depth only has to skip
a small forbidden set. Channels are independent work units; counts from
parallel workers are merged by addition.

The module also enumerates the alignment patterns an n = 2K-1 solution
would need (two interference dimensions per receiver, one signal of each
transmitter in each), derives which channel minors each pattern forces to
vanish or not, and samples channels that satisfy the backhaul scheme's
constraints.
"""
from __future__ import annotations

import functools
import logging
import multiprocessing as mp
import time
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from cyclic_ia.cpcm import MessageId, compose_transmit, decode, make_messages, propagate
from cyclic_ia.errors import DimensionError, SearchGuardError
from cyclic_ia.ring import ParamVector, ShiftMatrix, minor_of
from cyclic_ia.schemes.constraints import check_constraints
from cyclic_ia.separability import check_all, full_catalog, pairwise_conditions

logger = logging.getLogger(__name__)

NORMALIZATION = (
    'rows of D scaled by x^(-d_jj): receiver-row scaling permutes received slots only',
    'p shifted globally so that p_11 = 0: a common shift moves every slot of every receiver together',
)


@dataclass(frozen=True)
class SearchSpace:
    n: int
    K: int = 3

    def __post_init__(self):
        if self.n < 1 or self.K < 2:
            raise DimensionError(f'search space needs n >= 1 and K >= 2, got n={self.n}, K={self.K}')

    @property
    def free_channel_entries(self) -> int:
        return self.K * (self.K - 1)

    @property
    def channel_count(self) -> int:
        return self.n ** self.free_channel_entries

    @property
    def parameter_count(self) -> int:
        return self.n ** (self.K * self.K - 1)

    def parameter_order(self) -> list[tuple[int, int]]:
        """(rx, tx) pairs, transmitter-major; depth 0 is p_11."""
        return [(j, i) for i in range(1, self.K + 1) for j in range(1, self.K + 1)]

    def off_diagonal(self) -> list[tuple[int, int]]:
        return [(j, i) for j in range(1, self.K + 1) for i in range(1, self.K + 1) if i != j]


def normalized_channels(n: int, K: int = 3):
    """Every channel with a zero diagonal, off-diagonal exponents in lexicographic order."""
    space = SearchSpace(n, K)
    cells = space.off_diagonal()
    for values in product(range(n), repeat=len(cells)):
        rows = [[0] * K for _ in range(K)]
        for (j, i), v in zip(cells, values):
            rows[j - 1][i - 1] = v
        yield ShiftMatrix.from_exponents(rows, n)


@functools.lru_cache(maxsize=None)
def _catalog(K: int):
    if K == 3:
        return tuple(full_catalog(complete=True))
    return tuple(pairwise_conditions(K))


def compile_rules(D: ShiftMatrix, catalog, order) -> list[list[tuple[int, int]]] | None:
    """Per depth, the (earlier depth, delta) pairs it must avoid; None if D alone violates a condition."""
    depth = {param: idx for idx, param in enumerate(order)}
    rules: list[list[tuple[int, int]]] = [[] for _ in order]
    for cond in catalog:
        cl = D[cond.lhs.channel].k if cond.lhs.channel else 0
        cr = D[cond.rhs.channel].k if cond.rhs.channel else 0
        da, db = depth[cond.lhs.param], depth[cond.rhs.param]
        # cl + p_a != cr + p_b
        if da == db:
            if (cl - cr) % D.n == 0:
                return None
        elif da > db:
            rules[da].append((db, cr - cl))
        else:
            rules[db].append((da, cl - cr))
    return rules


def count_feasible(D: ShiftMatrix, catalog=None, witness_limit: int = 1) -> tuple[int, int, list]:
    """(nodes visited, feasible parameter vectors, first witnesses in transmitter order)."""
    K, n = D.size, D.n
    space = SearchSpace(n, K)
    order = space.parameter_order()
    rules = compile_rules(D, catalog if catalog is not None else _catalog(K), order)
    if rules is None:
        return 0, 0, []
    values = [0] * len(order)
    nodes = feasible = 0
    witnesses: list[tuple[int, ...]] = []

    def go(d):
        nonlocal nodes, feasible
        if d == len(order):
            feasible += 1
            if len(witnesses) < witness_limit:
                witnesses.append(tuple(values))
            return
        forbidden = {(values[o] + delta) % n for o, delta in rules[d]}
        for v in range(n):
            if v in forbidden:
                continue
            nodes += 1
            values[d] = v
            go(d + 1)

    go(1)
    return nodes, feasible, witnesses


def _search_chunk(chunk, n: int, K: int):
    out = []
    for idx, exps in chunk:
        D = ShiftMatrix.from_exponents(exps, n)
        nodes, feasible, witnesses = count_feasible(D, _catalog(K))
        out.append((idx, nodes, feasible, [(exps, w) for w in witnesses]))
    return out


@dataclass(frozen=True)
class InfeasibilityCertificate:
    n: int
    K: int
    channels: int
    parameter_space: int
    examined: int
    feasible: int
    exhaustive: bool
    elapsed: float = field(default=0.0, compare=False)
    normalization: tuple[str, ...] = NORMALIZATION
    witnesses: tuple = ()

    @property
    def valid(self) -> bool:
        """Infeasibility is certified only by a full sweep that found nothing."""
        return self.exhaustive and self.feasible == 0

    def without_timing(self) -> 'InfeasibilityCertificate':
        return replace(self, elapsed=0.0)


def prove_infeasibility(n: int, K: int = 3, jobs: int = 1, channels=None, max_n: int = 7,
                        chunk_size: int = 256) -> InfeasibilityCertificate:
    """
    Count feasible normalized (D, p) configurations.

    `channels` restricts the sweep to the given ShiftMatrix list; such a
    certificate is marked non-exhaustive and never counts as a proof.
    """
    if n > max_n:
        raise SearchGuardError(f'exhaustive search limited to n <= {max_n}, got n={n}')
    space = SearchSpace(n, K)
    exhaustive = channels is None
    if channels is None:
        exps = [D.exponents() for D in normalized_channels(n, K)]
    else:
        exps = [D.exponents() for D in channels]
        if any(D.n != n or D.size != K for D in channels):
            raise DimensionError(f'channels must be {K}x{K} over ring {n}')
    work = list(enumerate(exps))
    chunks = [work[s:s + chunk_size] for s in range(0, len(work), chunk_size)]
    task = functools.partial(_search_chunk, n=n, K=K)

    started = time.perf_counter()
    results = []
    if jobs > 1 and len(chunks) > 1:
        with mp.Pool(jobs) as pool:
            for done, part in enumerate(pool.imap_unordered(task, chunks), 1):
                results.extend(part)
                logger.info('n=%d K=%d: %d/%d chunks searched', n, K, done, len(chunks))
    else:
        for done, chunk in enumerate(chunks, 1):
            results.extend(task(chunk))
            logger.info('n=%d K=%d: %d/%d chunks searched', n, K, done, len(chunks))
    elapsed = time.perf_counter() - started

    results.sort(key=lambda r: r[0])
    examined = sum(r[1] for r in results)
    feasible = sum(r[2] for r in results)
    witnesses = tuple(w for r in results for w in r[3])[:5]
    cert = InfeasibilityCertificate(n, K, len(exps), space.parameter_count, examined, feasible, exhaustive,
                                    elapsed, NORMALIZATION, witnesses)
    logger.info('n=%d K=%d: %d channels, %d nodes, %d feasible in %.1fs', n, K, cert.channels, examined,
                feasible, elapsed)
    return cert


def is_feasible(D: ShiftMatrix, p: ParamVector) -> bool:
    """All K^2 messages decode with no side information."""
    if D.size == 3:
        return check_all(D, p).is_empty()
    return all(c.holds(D, p) for c in pairwise_conditions(D.size))


def reference_feasible_count(n: int, K: int = 3, channels=None) -> int:
    """Brute force without pruning, decided by propagating and decoding real signals."""
    space = SearchSpace(n, K)
    channels = list(channels) if channels is not None else list(normalized_channels(n, K))
    messages = make_messages(K, 1, 0)
    order = space.parameter_order()
    total = 0
    for D in channels:
        for values in product(range(n), repeat=len(order) - 1):
            p = ParamVector.from_mapping(dict(zip(order, (0,) + values)), n, K)
            transmits = [compose_transmit(i, p, messages) for i in range(1, K + 1)]
            decoded = set()
            for j in range(1, K + 1):
                decoded.update(decode(propagate(D, transmits, j)).decoded)
            if len(decoded) == K * K:
                total += 1
    return total


# ── Alignment patterns ───────────────────────────────────────────────────

def _rotation(receiver: int, K: int = 3) -> tuple[int, int, int]:
    return tuple(((receiver - 1 + s) % K) + 1 for s in range(K))


@dataclass(frozen=True)
class AlignmentPattern:
    """Two interference dimensions at one receiver, one signal per transmitter in each."""
    receiver: int
    choice: tuple[int, int, int]
    first: tuple      # MessageIds aligned in one dimension
    second: tuple     # the complementary dimension

    def complement(self) -> 'AlignmentPattern':
        return AlignmentPattern(self.receiver, tuple(1 - c for c in self.choice), self.second, self.first)

    def groups(self) -> tuple[tuple, tuple]:
        return self.first, self.second

    def same_dimension(self, a, b) -> bool:
        return any(a in g and b in g for g in self.groups())

    def __str__(self):
        def fmt(g):
            return '=='.join(str(m) for m in g)
        return f'Rx_{self.receiver}: [{fmt(self.first)}] [{fmt(self.second)}]'


def enumerate_patterns(assignment=(1, 2, 3), receiver: int = 1) -> list[AlignmentPattern]:
    """The 8 choices of one element per transmitter; pattern k and 7-k are complements."""
    if receiver not in assignment:
        raise DimensionError(f'receiver {receiver} not in {assignment}')
    r, s, u = _rotation(receiver)
    sets = (
        (MessageId(s, r), MessageId(u, r)),   # Tx_r
        (MessageId(s, s), MessageId(u, s)),   # Tx_s
        (MessageId(s, u), MessageId(u, u)),   # Tx_u
    )
    out = []
    for choice in product((0, 1), repeat=3):
        first = tuple(sets[t][c] for t, c in enumerate(choice))
        second = tuple(sets[t][1 - c] for t, c in enumerate(choice))
        out.append(AlignmentPattern(receiver, choice, first, second))
    return out


@dataclass(frozen=True)
class MinorRequirement:
    rows: tuple[int, int]
    cols: tuple[int, int]
    zero: bool
    reason: str

    @property
    def key(self):
        return self.rows, self.cols

    def satisfied_by(self, D: ShiftMatrix) -> bool:
        return minor_of(D, self.rows, self.cols).is_zero() == self.zero

    def __str__(self):
        rel = '== 0' if self.zero else '!= 0'
        return f'det D[{self.rows[0]},{self.rows[1]};{self.cols[0]},{self.cols[1]}] {rel}  ({self.reason})'


@dataclass(frozen=True)
class RequirementSet:
    requirements: tuple[MinorRequirement, ...]
    contradictions: tuple[tuple[MinorRequirement, MinorRequirement], ...]
    unmet: tuple[MinorRequirement, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.contradictions

    def zero_keys(self) -> set:
        return {r.key for r in self.requirements if r.zero}

    def nonzero_keys(self) -> set:
        return {r.key for r in self.requirements if not r.zero}

    def satisfied_by(self, D: ShiftMatrix) -> bool:
        return all(r.satisfied_by(D) for r in self.requirements)


def pattern_requirements(patterns, D: ShiftMatrix | None = None) -> RequirementSet:
    """
    For each pair aligned at one receiver, what the minor on rows
    {receiver, other} and the pair's transmitter columns must be at every
    other receiver: nonzero where a dedicated message is involved or the
    other receiver separates the pair, zero where it aligns them too.

    With `D` given, the requirements D fails are listed in `unmet`.
    """
    by_rx = {pat.receiver: pat for pat in patterns}
    seen: dict = {}
    contradictions = []
    for pat in patterns:
        r = pat.receiver
        for group in pat.groups():
            for ia in range(len(group)):
                for ib in range(ia + 1, len(group)):
                    a, b = group[ia], group[ib]
                    for other, opat in by_rx.items():
                        if other == r:
                            continue
                        if a.rx == other or b.rx == other:
                            zero = False
                            reason = f'{a}/{b} aligned at Rx_{r}, dedicated at Rx_{other}'
                        elif opat.same_dimension(a, b):
                            zero = True
                            reason = f'{a}/{b} aligned at Rx_{r} and Rx_{other}'
                        else:
                            zero = False
                            reason = f'{a}/{b} aligned at Rx_{r}, separated at Rx_{other}'
                        req = MinorRequirement(tuple(sorted((r, other))), tuple(sorted((a.tx, b.tx))), zero, reason)
                        prior = seen.get(req.key)
                        if prior is None:
                            seen[req.key] = req
                        elif prior.zero != req.zero:
                            contradictions.append((prior, req))
    reqs = tuple(seen.values())
    unmet = tuple(r for r in reqs if not r.satisfied_by(D)) if D is not None else ()
    return RequirementSet(reqs, tuple(contradictions), unmet)


class _WeightedUnionFind:
    """p_a - p_b relations mod n; find returns (root, p_node - p_root)."""

    def __init__(self, n: int):
        self.n = n
        self.parent: dict = {}
        self.weight: dict = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x], self.weight[x] = x, 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root, acc = x, 0
        for node in reversed(path):
            acc = (acc + self.weight[node]) % self.n
            self.weight[node] = acc
            self.parent[node] = root
        return root, (self.weight[path[0]] if path else 0)

    def union(self, a, b, diff) -> bool:
        """Impose p_a - p_b == diff; False on conflict."""
        ra, wa = self.find(a)
        rb, wb = self.find(b)
        if ra == rb:
            return (wa - wb - diff) % self.n == 0
        # p_ra = p_a - wa, p_rb = p_b - wb
        self.parent[ra] = rb
        self.weight[ra] = (diff + wb - wa) % self.n
        return True


def _parameters_for(D: ShiftMatrix, patterns) -> list[ParamVector]:
    """Every p (with p_11 = 0) realizing the alignment equalities on D."""
    n, K = D.n, D.size
    uf = _WeightedUnionFind(n)
    order = SearchSpace(n, K).parameter_order()
    for q in order:
        uf.find(q)
    for pat in patterns:
        r = pat.receiver
        for group in pat.groups():
            head = group[0]
            for m in group[1:]:
                # d_r,head.tx + p_head == d_r,m.tx + p_m
                diff = D[r, m.tx].k - D[r, head.tx].k
                if not uf.union((head.rx, head.tx), (m.rx, m.tx), diff):
                    return []
    anchor, _ = uf.find((1, 1))
    roots = sorted({uf.find(q)[0] for q in order} - {anchor})
    out = []
    for values in product(range(n), repeat=len(roots)):
        root_value = dict(zip(roots, values))
        _, w11 = uf.find((1, 1))
        root_value[anchor] = -w11
        mapping = {}
        for q in order:
            root, w = uf.find(q)
            mapping[q] = root_value[root] + w
        out.append(ParamVector.from_mapping(mapping, n, K))
    return out


@dataclass(frozen=True)
class PatternSweepReport:
    n: int
    joint_patterns: int
    contradicted: int
    unsatisfiable: int
    satisfiable: int
    witnesses: tuple = ()


def _channel_array(n: int, K: int = 3) -> np.ndarray:
    cells = SearchSpace(n, K).off_diagonal()
    grid = np.array(list(product(range(n), repeat=len(cells))), dtype=np.int64).reshape(-1, len(cells))
    out = np.zeros((grid.shape[0], K, K), dtype=np.int64)
    for col, (j, i) in enumerate(cells):
        out[:, j - 1, i - 1] = grid[:, col]
    return out


def pattern_sweep(n: int = 5, assignment=(1, 2, 3)) -> PatternSweepReport:
    """
    Walk all 8^3 joint patterns. A joint pattern either forces some minor
    to be zero and nonzero at once, or is checked for a channel meeting its
    minor requirements plus parameters meeting its alignments and every
    separability condition.
    """
    per_rx = [enumerate_patterns(assignment, r) for r in (1, 2, 3)]
    chans = _channel_array(n)
    contradicted = unsatisfiable = satisfiable = 0
    witnesses = []
    for joint in product(*per_rx):
        reqs = pattern_requirements(joint)
        if not reqs.consistent:
            contradicted += 1
            continue
        mask = np.ones(chans.shape[0], dtype=bool)
        for req in reqs.requirements:
            (r1, r2), (c1, c2) = req.rows, req.cols
            pos = chans[:, r1 - 1, c1 - 1] + chans[:, r2 - 1, c2 - 1]
            neg = chans[:, r1 - 1, c2 - 1] + chans[:, r2 - 1, c1 - 1]
            is_zero = (pos - neg) % n == 0
            mask &= is_zero if req.zero else ~is_zero
        found = None
        for idx in np.flatnonzero(mask):
            D = ShiftMatrix.from_exponents(chans[idx].tolist(), n)
            for p in _parameters_for(D, joint):
                if check_all(D, p).is_empty():
                    found = (D, p)
                    break
            if found:
                break
        if found:
            satisfiable += 1
            witnesses.append(found)
        else:
            unsatisfiable += 1
    report = PatternSweepReport(n, 8 ** 3, contradicted, unsatisfiable, satisfiable, tuple(witnesses[:5]))
    logger.info('pattern sweep n=%d: %d contradicted, %d unsatisfiable, %d satisfiable',
                n, contradicted, unsatisfiable, satisfiable)
    return report


# ── Scheme-valid channels ────────────────────────────────────────────────

def sample_valid_channels(n: int, count: int | None = None, seed: int = 0, assignment=(1, 2, 3),
                          attempts: int = 200000, scan_limit: int = 5) -> list[ShiftMatrix]:
    """
    Diagonal-normalized channels passing constraints (i)-(x).

    Up to n = scan_limit every normalized channel is scanned in order; larger
    rings are sampled with a seeded generator that already satisfies the
    three-way equality (ii) and rejects on the full check.
    """
    if count is not None and count < 1:
        raise DimensionError(f'count must be positive, got {count}')
    if n <= scan_limit:
        out = []
        for D in normalized_channels(n):
            if check_constraints(D, assignment).holds:
                out.append(D)
                if count is not None and len(out) >= count:
                    break
        return out

    if count is None:
        raise DimensionError(f'count is required when sampling n={n}')
    i, j, k = assignment
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(attempts):
        a, b, c, e = (int(v) for v in rng.integers(0, n, size=4))
        total = a + c
        rows = [[0] * 3 for _ in range(3)]
        rows[i - 1][j - 1], rows[j - 1][i - 1] = a, c
        rows[i - 1][k - 1], rows[k - 1][i - 1] = b, total - b
        rows[j - 1][k - 1], rows[k - 1][j - 1] = e, total - e
        D = ShiftMatrix.from_exponents(rows, n)
        if check_constraints(D, assignment).holds:
            out.append(D)
            if len(out) >= count:
                break
    if len(out) < count:
        logger.warning('found %d of %d valid channels at n=%d within %d attempts', len(out), count, n, attempts)
    return out
