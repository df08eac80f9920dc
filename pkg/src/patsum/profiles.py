"""Change profiles: how frequencies change when items are added or removed."""
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from .errors import PreconditionError
from .itemsets import EMPTY, difference, intersection, is_subset, key, union
from .mining import RatedCollection

SPECIALIZING = "specializing"
GENERALIZING = "generalizing"
KINDS = (SPECIALIZING, GENERALIZING)
VARIANTS = ("full", "concise", "simple")


@dataclass
class ChangeProfile:
    owner: tuple
    kind: str
    variant: str
    changes: dict

    def items(self):
        return [(k, self.changes[k]) for k in sorted(self.changes, key=key)]


def _frequencies(c):
    if isinstance(c, RatedCollection):
        freq = c.frequencies()
    else:
        freq = dict(c)
    if any(v <= 0 for v in freq.values()):
        raise PreconditionError("change profiles need strictly positive frequencies")
    return freq


def change_profiles(c, kind=SPECIALIZING, variant="concise"):
    """Profiles of every member of a downward-closed collection, keyed by owner."""
    if kind not in KINDS:
        raise PreconditionError(f"unknown profile kind {kind!r}")
    if variant not in VARIANTS:
        raise PreconditionError(f"unknown profile variant {variant!r}")
    freq = _frequencies(c)
    owners = sorted(freq, key=key)
    out = {x: {} for x in owners}
    if variant == "full":
        for x in owners:
            if kind == SPECIALIZING:
                for z in owners:
                    if is_subset(x, z):
                        rest = difference(z, x)
                        for r in range(len(x) + 1):
                            for w in combinations(x, r):
                                out[x][union(rest, w)] = freq[z] / freq[x]
            else:
                for y in owners:
                    out[x][y] = freq[difference(x, y)] / freq[x]
    else:
        for x in owners:
            for r in range(len(x) + 1):
                for y in combinations(x, r):
                    rest = difference(x, y)
                    if rest not in freq:
                        raise PreconditionError(f"collection is not downward closed: {rest} missing")
                    if kind == SPECIALIZING:
                        out[rest][y] = freq[x] / freq[rest]
                    else:
                        out[x][y] = freq[rest] / freq[x]
        if variant == "simple":
            out = {x: {y: v for y, v in ch.items() if len(y) == 1} for x, ch in out.items()}
    return {
        x: ChangeProfile(x, kind, variant, dict(sorted(out[x].items(), key=lambda kv: key(kv[0]))))
        for x in owners
    }


def simple_profiles(c, kind=SPECIALIZING):
    return change_profiles(c, kind, "simple")


def expand_concise(profile: ChangeProfile, c):
    """Full profile recovered from a concise one and the collection's members."""
    if profile.variant != "concise":
        raise PreconditionError("expansion needs a concise profile")
    members = sorted(c.entries if isinstance(c, RatedCollection) else c, key=key)
    x = profile.owner
    out = {}
    for y in members:
        if profile.kind == SPECIALIZING:
            z = difference(y, x)
            for r in range(len(x) + 1):
                for w in combinations(x, r):
                    cand = union(z, w)
                    if union(x, cand) in set(members):
                        out[cand] = profile.changes[z]
        else:
            out[y] = profile.changes[intersection(y, x)]
    return ChangeProfile(x, profile.kind, "full", dict(sorted(out.items(), key=lambda kv: key(kv[0]))))


# distances and clustering -------------------------------------------------

METRICS = ("sum-abs", "max-abs")


def profile_distance(p: ChangeProfile, q: ChangeProfile, metric="sum-abs"):
    """Distance over the common domain; None when the domains do not meet."""
    if p.kind != q.kind or p.variant != q.variant:
        raise PreconditionError("profiles of different kinds are not comparable")
    common = [k for k in p.changes if k in q.changes]
    if not common:
        return None
    diffs = [abs(p.changes[k] - q.changes[k]) for k in common]
    if metric == "sum-abs":
        return sum(diffs)
    if metric == "max-abs":
        return max(diffs)
    raise PreconditionError(f"unknown metric {metric!r}")


@dataclass
class Dendrogram:
    """A leaf (``owner`` set, no children) or a merge of two subtrees."""

    members: tuple
    height: object = 0
    left: "Dendrogram" = None
    right: "Dendrogram" = None

    @property
    def is_leaf(self):
        return self.left is None

    def merges(self):
        """(members_left, members_right, height) in merge order (post-order by height)."""
        if self.is_leaf:
            return []
        out = self.left.merges() + self.right.merges()
        out.append((self.left.members, self.right.members, self.height))
        return sorted(out, key=lambda m: m[2])


def agglomerative_cluster(profiles, metric="sum-abs"):
    """Average-linkage clustering; undefined distances count as 0.

    Ties go to the lexicographically smallest pair of member lists.
    """
    profs = list(profiles.values()) if isinstance(profiles, dict) else list(profiles)
    if not profs:
        raise PreconditionError("nothing to cluster")
    profs.sort(key=lambda p: key(p.owner))
    n = len(profs)
    dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            d = profile_distance(profs[i], profs[j], metric)
            dist[i, j] = dist[j, i] = 0 if d is None else d
    clusters = [([i], Dendrogram((profs[i].owner,))) for i in range(n)]

    def label(cl):
        return tuple(key(profs[i].owner) for i in sorted(cl[0]))

    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                ia, ib = clusters[a][0], clusters[b][0]
                total = sum(dist[i, j] for i in ia for j in ib)
                avg = total / (len(ia) * len(ib)) if isinstance(total, float) else Fraction(total) / (len(ia) * len(ib))
                la, lb = sorted((label(clusters[a]), label(clusters[b])))
                cand = (avg, la, lb, a, b)
                if best is None or cand[:3] < best[:3]:
                    best = cand
        avg, _, _, a, b = best
        ca, cb = clusters[a], clusters[b]
        if label(ca) > label(cb):
            ca, cb = cb, ca
        merged = (ca[0] + cb[0], Dendrogram(ca[1].members + cb[1].members, avg, ca[1], cb[1]))
        clusters = [c for k, c in enumerate(clusters) if k not in (a, b)] + [merged]
    return clusters[0][1]


# frequency estimation -----------------------------------------------------

def _change(sch, owner, item):
    prof = sch[owner] if owner in sch else None
    if prof is None:
        raise PreconditionError(f"no profile for {owner}")
    changes = prof.changes if isinstance(prof, ChangeProfile) else prof
    k = (item,)
    if k not in changes:
        raise PreconditionError(f"profile of {owner} lacks the change for item {item}")
    return changes[k]


def dp_from_schs(x, sch):
    """Average over all item orders of the products of changes along the path.

    Computed bottom-up over the subsets of ``x``: each subset averages its
    one-smaller subsets times the change that adds the missing item.
    """
    x = tuple(sorted(x))
    est = {EMPTY: 1}
    for r in range(1, len(x) + 1):
        for y in combinations(x, r):
            total = 0
            for a in y:
                z = difference(y, (a,))
                total += est[z] * _change(sch, z, a)
            est[y] = total / r if not isinstance(total, int) else Fraction(total, r)
    return est[x]


def path_average(x, sch):
    """Same quantity as dp_from_schs by enumerating all |x|! orders."""
    x = tuple(sorted(x))
    total, count = 0, 0
    for perm in permutations(x):
        prod = 1
        prefix = EMPTY
        for a in perm:
            prod *= _change(sch, prefix, a)
            prefix = union(prefix, (a,))
        total += prod
        count += 1
    return total / count if not isinstance(total, int) else Fraction(total, count)


def sample_path_products(x, sch, k, seed):
    if k < 1:
        raise PreconditionError("need at least one path")
    x = tuple(sorted(x))
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(k):
        prod = 1
        prefix = EMPTY
        for pos in rng.permutation(len(x)):
            a = x[pos]
            prod *= _change(sch, prefix, a)
            prefix = union(prefix, (a,))
        out.append(prod)
    return out


def sample_from_schs(x, sch, k, seed):
    """Mean path product over k uniformly random item orders."""
    prods = sample_path_products(x, sch, k, seed)
    total = sum(prods)
    return Fraction(total, k) if isinstance(total, (int, Fraction)) else total / k


def interval_from_schs(x, sch, eps):
    """Bounds on fr(x) when every change is known only within +-eps.

    Every path multiplies intervals, so the truth lies in the
    intersection over all paths; computed bottom-up like dp_from_schs.
    """
    x = tuple(sorted(x))
    lo, hi = {EMPTY: 1}, {EMPTY: 1}
    for r in range(1, len(x) + 1):
        for y in combinations(x, r):
            lows, highs = [], []
            for a in y:
                z = difference(y, (a,))
                c = _change(sch, z, a)
                lows.append(lo[z] * max(0, c - eps))
                highs.append(hi[z] * min(1, c + eps))
            lo[y], hi[y] = max(lows), min(highs)
    return lo[x], hi[x]


NOISE_MODELS = ("perturb", "uniform", "gaussian")


def noisify_profiles(profiles, model, eps, seed):
    """Perturb every change and truncate to [0, 1]; specializing profiles only."""
    if model not in NOISE_MODELS:
        raise PreconditionError(f"unknown noise model {model!r}")
    if eps < 0:
        raise PreconditionError("eps must be non-negative")
    rng = np.random.default_rng(seed)
    out = {}
    for owner in sorted(profiles, key=key):
        p = profiles[owner]
        if p.kind != SPECIALIZING:
            raise PreconditionError("noise is defined for specializing profiles")
        if eps == 0:
            out[owner] = ChangeProfile(owner, p.kind, p.variant, dict(p.changes))
            continue
        ks = sorted(p.changes, key=key)
        if model == "perturb":
            noise = eps * rng.choice([-1.0, 1.0], size=len(ks))
        elif model == "uniform":
            noise = rng.uniform(-eps, eps, size=len(ks))
        else:
            noise = rng.normal(0.0, eps, size=len(ks))
        changes = {
            k: min(1.0, max(0.0, float(p.changes[k]) + float(e)))
            for k, e in zip(ks, noise)
        }
        out[owner] = ChangeProfile(owner, p.kind, p.variant, changes)
    return out


def standard_error(values):
    n = len(values)
    if n < 2:
        return math.inf
    arr = np.asarray([float(v) for v in values])
    return float(arr.std(ddof=1) / math.sqrt(n))
