"""Independent reference computations for cross-checking the engine.

Nothing here imports the engine's linear algebra or system builders: systems
are written out densely over all ordered index pairs and ranks come from a
textbook elimination or from determinants of minors.
"""
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
import random


def naive_rank(rows):
    """Forward elimination to row echelon form on integer rows (fraction-free)."""
    m = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in fr]
        if any(ints):
            m.append(ints)
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        keep = m[: rank + 1]
        for row in m[rank + 1 :]:
            if row[c]:
                a, b = p[c], row[c]
                row = [a * x - b * y for x, y in zip(row, p)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                if not g:
                    continue
                row = [x // g for x in row]
            keep.append(row)
        m = keep
        rank += 1
    return rank


def det(m):
    """Leibniz expansion; only for tiny matrices."""
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Fraction(sign)
        for i in range(n):
            term *= m[i][perm[i]]
            if not term:
                break
        total += term
    return total


def minors_rank(rows):
    """Largest k with a nonzero k×k minor."""
    if not rows:
        return 0
    nr, nc = len(rows), len(rows[0])
    for k in range(min(nr, nc), 0, -1):
        for rs in combinations(range(nr), k):
            for cs in combinations(range(nc), k):
                if det([[Fraction(rows[i][j]) for j in cs] for i in rs]):
                    return k
    return 0


def dense_constants(t):
    n = t.dim
    return [[[t.structure_constant(i + 1, j + 1, k + 1) for k in range(n)] for j in range(n)] for i in range(n)]


def naive_is_lie(c):
    n = len(c)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    return False
    for a in range(n):
        for b in range(n):
            for d in range(n):
                for out in range(n):
                    s = Fraction(0)
                    for m in range(n):
                        s += c[b][d][m] * c[a][m][out] + c[d][a][m] * c[b][m][out] + c[a][b][m] * c[d][m][out]
                    if s:
                        return False
    return True


def naive_derivation_dim(c, delta):
    """dim of {φ : φ[x,y] = δ([φx,y] + [x,φy])}; unknown φ[k][i] is the e_k-coordinate of φ(e_i)."""
    n = len(c)
    delta = Fraction(delta)

    def var(k, i):
        return k * n + i

    rows = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                for m in range(n):
                    row[var(k, m)] += c[i][j][m]
                    # [φe_i, e_j] and [e_i, φe_j]
                    row[var(m, i)] -= delta * c[m][j][k]
                    row[var(m, j)] -= delta * c[i][m][k]
                rows.append(row)
    return n * n - naive_rank(rows)


def naive_tpa_dim(c):
    """dim of commutative products p with 2 z·[x,y] = [z·x,y] + [x,z·y] on basis triples.

    Unknowns are all n³ constants p[i][j][k]; symmetry is imposed by equations.
    """
    n = len(c)

    def var(i, j, k):
        return (i * n + j) * n + k

    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = [Fraction(0)] * n**3
                row[var(i, j, k)] += 1
                row[var(j, i, k)] -= 1
                rows.append(row)
    for z in range(n):
        for x in range(n):
            for y in range(n):
                for out in range(n):
                    row = [Fraction(0)] * n**3
                    for m in range(n):
                        row[var(z, m, out)] += 2 * c[x][y][m]
                        row[var(z, x, m)] -= c[m][y][out]
                        row[var(z, y, m)] -= c[x][m][out]
                    rows.append(row)
    return n**3 - naive_rank(rows)


# -- random Lie brackets -----------------------------------------------------------

# (dim, {(i, j): {k: c}}) with 0-based indices; parameters filled in per draw
def _pool(rng):
    a, b = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    return [
        (2, {}),
        (2, {(0, 1): {1: 1}}),
        (3, {(0, 1): {2: 1}}),
        (3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}),  # so(3)
        (3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}),  # sl(2)
        (3, {(2, 0): {0: 1}, (2, 1): {1: a}}),
        (3, {(2, 0): {0: 1, 1: 1}, (2, 1): {1: 1}}),
        (4, {(0, 1): {2: 1}, (0, 2): {3: 1}}),  # filiform
        (4, {(0, 1): {2: 1}}),
        (4, {(3, 0): {0: 1}, (3, 1): {1: a}, (3, 2): {2: b}}),
        (4, {(0, 1): {2: 1}, (3, 0): {0: 1}, (3, 1): {1: a}, (3, 2): {2: 1 + a}}),
        (4, {(0, 1): {1: 1}, (2, 3): {3: 1}}),
        (4, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}),  # sl(2) + abelian
    ]


def random_invertible(rng, n):
    while True:
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if det(m):
            return m


def random_lie_constants(rng):
    """Random Lie structure constants of dim ≤ 4: a pool algebra in a random basis."""
    n, table = rng.choice(_pool(rng))
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), vec in table.items():
        for k, v in vec.items():
            c[i][j][k] += v
            c[j][i][k] -= v
    return change_basis(c, random_invertible(rng, n))


def change_basis(c, g):
    """Constants in the basis f_i = Σ_r g[r][i] e_r (columns of g), by solving with g⁻¹."""
    n = len(c)
    ginv = _inverse(g)
    out = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            val = [Fraction(0)] * n
            for r in range(n):
                for s in range(n):
                    w = g[r][i] * g[s][j]
                    if w:
                        for k in range(n):
                            val[k] += w * c[r][s][k]
            out[i][j] = [sum(ginv[k][m] * val[m] for m in range(n)) for k in range(n)]
    return out


def _inverse(g):
    n = len(g)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(g)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def constants_to_entries(c):
    n = len(c)
    return {(i + 1, j + 1): {k + 1: c[i][j][k] for k in range(n) if c[i][j][k]} for i in range(n) for j in range(i, n)}


def seeded(seed):
    return random.Random(seed)
