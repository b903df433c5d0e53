"""Finite groups as indexed Cayley tables, plus a spec mini-language.

Conventions: elements are indices 0..m-1 with the identity fixed at 0,
and ``table[a][b]`` is the index of a*b.  For permutation-backed groups
the product "a*b" means "apply a, then b"; isomorphism classes do not
depend on this choice.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import GroupSpecError, GroupValidationError, SizeLimitError

DEFAULT_MAX_ORDER = 64

_FAMILY_RE = re.compile(r"^(C|D|S)(\d+)$")


@dataclass(frozen=True)
class FiniteGroup:
    """An abstract finite group given by its full multiplication table."""

    order: int
    table: tuple[tuple[int, ...], ...]
    name: str = ""

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        row = self.table[a]
        for b in range(self.order):
            if row[b] == 0:
                return b
        raise GroupValidationError("inverse", (a,), f"element {a} has no inverse")

    def element_order(self, a: int) -> int:
        """Least k >= 1 with a^k = identity."""
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def order_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_order(a) for a in range(self.order)))

    def closure(self, seed: set[int]) -> set[int]:
        """Subgroup generated by `seed` (always contains the identity)."""
        members = {0} | set(seed)
        frontier = list(members)
        while frontier:
            a = frontier.pop()
            for b in list(members):
                for c in (self.table[a][b], self.table[b][a]):
                    if c not in members:
                        members.add(c)
                        frontier.append(c)
        return members


def validate_table(table: tuple[tuple[int, ...], ...]) -> None:
    """Check all four group laws, raising with a witness triple on failure."""
    m = len(table)
    for a in range(m):
        if len(table[a]) != m:
            raise GroupValidationError("shape", (a,), f"row {a} has length {len(table[a])}, expected {m}")
        for b in range(m):
            v = table[a][b]
            if not isinstance(v, int) or not 0 <= v < m:
                raise GroupValidationError("range", (a, b), f"table[{a}][{b}] = {v} out of range 0..{m - 1}")
    for a in range(m):
        if len(set(table[a])) != m:
            raise GroupValidationError("latin-row", (a,), f"row {a} is not a permutation of 0..{m - 1}")
        col = {table[b][a] for b in range(m)}
        if len(col) != m:
            raise GroupValidationError("latin-column", (a,), f"column {a} is not a permutation of 0..{m - 1}")
    for a in range(m):
        if table[0][a] != a or table[a][0] != a:
            raise GroupValidationError("identity", (a,), f"identity law fails at element {a}")
    for a in range(m):
        if 0 not in table[a]:
            raise GroupValidationError("inverse", (a,), f"element {a} has no inverse")
    for a in range(m):
        ta = table[a]
        for b in range(m):
            tab = table[ta[b]]
            tb = table[b]
            for c in range(m):
                if tab[c] != ta[tb[c]]:
                    raise GroupValidationError(
                        "associativity", (a, b, c),
                        f"(a*b)*c != a*(b*c) at (a,b,c)=({a},{b},{c})")


def _make(table: list[list[int]], name: str) -> FiniteGroup:
    frozen = tuple(tuple(row) for row in table)
    validate_table(frozen)
    return FiniteGroup(order=len(frozen), table=frozen, name=name)


def trivial_group() -> FiniteGroup:
    return _make([[0]], "trivial")


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupSpecError(f"C{n}: n must be >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return _make(table, f"C{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element f*n + r is rotation^r * flip^f."""
    if n < 1:
        raise GroupSpecError(f"D{n}: n must be >= 1")
    m = 2 * n

    def mul(x: int, y: int) -> int:
        r1, f1 = x % n, x // n
        r2, f2 = y % n, y // n
        r = (r1 + (r2 if f1 == 0 else -r2)) % n
        return ((f1 + f2) % 2) * n + r

    table = [[mul(x, y) for y in range(m)] for x in range(m)]
    return _make(table, f"D{n}")


def symmetric_group(n: int) -> FiniteGroup:
    """S_n with elements numbered by lexicographic order of image tuples."""
    if n < 1:
        raise GroupSpecError(f"S{n}: n must be >= 1")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(q[p[i]] for i in range(n))] for q in perms] for p in perms]
    return _make(table, f"S{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """A x B with element (x, y) numbered x*|B| + y (identity stays 0)."""
    m = a.order * b.order
    table = [[0] * m for _ in range(m)]
    for x1 in range(a.order):
        for y1 in range(b.order):
            i = x1 * b.order + y1
            for x2 in range(a.order):
                row_a = a.table[x1]
                row_b = b.table[y1]
                base = row_a[x2] * b.order
                for y2 in range(b.order):
                    table[i][x2 * b.order + y2] = base + row_b[y2]
    name = f"{a.name}x{b.name}" if a.name and b.name else ""
    return _make(table, name)


def group_from_table_file(path: str | Path) -> FiniteGroup:
    """Cayley-table file: line 1 = m, next m lines = m space-separated indices."""
    p = Path(path)
    try:
        lines = [ln for ln in p.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise GroupSpecError(f"cannot read table file {p}: {exc}") from exc
    if not lines:
        raise GroupSpecError(f"table file {p} is empty")
    try:
        m = int(lines[0])
    except ValueError:
        raise GroupSpecError(f"table file {p}: first line must be the order") from None
    if m < 1 or len(lines) != m + 1:
        raise GroupSpecError(f"table file {p}: expected {m} table rows, found {len(lines) - 1}")
    table = []
    for ln in lines[1:]:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise GroupSpecError(f"table file {p}: non-integer entry in row {len(table)}") from None
        table.append(row)
    frozen = tuple(tuple(row) for row in table)
    validate_table(frozen)
    return FiniteGroup(order=m, table=frozen, name=f"table:{p}")


def build_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build a validated group from a spec string.

    Grammar: ``trivial`` | ``C<n>`` | ``D<n>`` (order 2n) | ``S<n>`` |
    ``<spec>x<spec>`` (direct product, left-associative) | ``table:<path>``.
    A ``table:`` spec must be the whole string (paths may contain 'x').
    """
    spec = spec.strip()
    if not spec:
        raise GroupSpecError("empty group spec")
    if spec.startswith("table:"):
        g = group_from_table_file(spec[len("table:"):])
        if g.order > max_order:
            raise SizeLimitError(f"group order {g.order} exceeds bound {max_order}")
        return g
    factors = spec.split("x")
    group: FiniteGroup | None = None
    for factor in factors:
        g = _build_atom(factor)
        group = g if group is None else direct_product(group, g)
        if group.order > max_order:
            raise SizeLimitError(
                f"group spec {spec!r}: order {group.order} exceeds bound {max_order}")
    assert group is not None
    return group


def _build_atom(token: str) -> FiniteGroup:
    token = token.strip()
    if token == "trivial":
        return trivial_group()
    m = _FAMILY_RE.match(token)
    if not m:
        raise GroupSpecError(
            f"bad group spec term {token!r}: expected trivial, C<n>, D<n>, S<n>, or table:<path>")
    family, n = m.group(1), int(m.group(2))
    if family == "C":
        return cyclic_group(n)
    if family == "D":
        return dihedral_group(n)
    if n > 5:
        raise SizeLimitError(f"S{n} has order {n}! which exceeds any sane bound here")
    return symmetric_group(n)


def minimal_generating_set(g: FiniteGroup) -> list[int]:
    """Minimum-cardinality generating set, lexicographically least.

    Exhausts subsets in increasing size.  Candidate sets where some
    element lies in the closure of its predecessors cannot achieve the
    minimum size, so the DFS prunes them; within a size, prefixes are
    explored in index order, which yields the lexicographically least
    minimum-size set.  The trivial group returns the empty set.
    """
    full = set(range(g.order))
    if g.order == 1:
        return []
    for size in range(_size_lower_bound(g), g.order):
        found = _gen_search(g, full, [], {0}, 1, size)
        if found is not None:
            return found
    raise AssertionError("every finite group is generated by its elements")


def _size_lower_bound(g: FiniteGroup) -> int:
    """Cheap lower bound on generating-set size.

    In an abelian group, k elements generate at most the product of
    their orders, so k must push that product past |G|.  Saves the
    exhaustive search from grinding through C2^k-style groups.
    """
    abelian = all(
        g.table[a][b] == g.table[b][a]
        for a in range(g.order) for b in range(a + 1, g.order))
    if not abelian:
        return 1
    orders = sorted((g.element_order(a) for a in range(1, g.order)), reverse=True)
    prod, k = 1, 0
    while prod < g.order and k < len(orders):
        prod *= orders[k]
        k += 1
    return max(1, k)


def _gen_search(g: FiniteGroup, full: set[int], prefix: list[int],
                closed: set[int], start: int, size: int) -> list[int] | None:
    if len(prefix) == size:
        return list(prefix) if closed == full else None
    # not enough elements left to fill the set
    for e in range(start, g.order - (size - len(prefix)) + 1):
        if e in closed:
            continue
        prefix.append(e)
        result = _gen_search(g, full, prefix, g.closure(closed | {e}), e + 1, size)
        prefix.pop()
        if result is not None:
            return result
    return None


def _generator_expressions(g: FiniteGroup, gens: list[int]) -> list[tuple[int, int]]:
    """BFS parents: expr[x] = (prev, gen) with x = prev * gen, identity at root."""
    expr: list[tuple[int, int] | None] = [None] * g.order
    seen = {0}
    queue = [0]
    while queue:
        x = queue.pop(0)
        for s in gens:
            y = g.table[x][s]
            if y not in seen:
                seen.add(y)
                expr[y] = (x, s)
                queue.append(y)
    if len(seen) != g.order:
        raise AssertionError("generators do not generate the group")
    return expr  # type: ignore[return-value]


def are_isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    """Exact isomorphism test.

    Rejects fast on order and element-order multiset, then backtracks
    over images of a minimal generating set of `a`, extending each
    assignment multiplicatively and checking it is a bijective
    homomorphism.  No probabilistic shortcuts.
    """
    if a.order != b.order:
        return False
    if a.order_multiset() != b.order_multiset():
        return False
    if a.order == 1:
        return True
    gens = minimal_generating_set(a)
    expr = _generator_expressions(a, gens)
    gen_orders = [a.element_order(s) for s in gens]
    candidates = [
        [y for y in range(b.order) if b.element_order(y) == gen_orders[i]]
        for i in range(len(gens))
    ]
    order_of_definition = sorted(range(a.order), key=lambda x: _expr_depth(expr, x))
    for images in itertools.product(*candidates):
        if len(set(images)) != len(images):
            continue
        if _extends_to_isomorphism(a, b, gens, expr, images, order_of_definition):
            return True
    return False


def _extends_to_isomorphism(a: FiniteGroup, b: FiniteGroup, gens: list[int],
                            expr: list[tuple[int, int]], images: tuple[int, ...],
                            order_of_definition: list[int]) -> bool:
    gen_image = dict(zip(gens, images))
    phi = [-1] * a.order
    phi[0] = 0
    # evaluate phi bottom-up along BFS expressions
    for x in order_of_definition:
        if x == 0:
            continue
        prev, s = expr[x]
        phi[x] = b.table[phi[prev]][gen_image[s]]
    if len(set(phi)) != a.order:
        return False
    for x in range(a.order):
        row = a.table[x]
        brow = b.table[phi[x]]
        for y in range(a.order):
            if phi[row[y]] != brow[phi[y]]:
                return False
    return True


def _expr_depth(expr: list[tuple[int, int] | None], x: int) -> int:
    d = 0
    while x != 0:
        x = expr[x][0]
        d += 1
    return d


CATALOG_SPECS = (
    "trivial", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3",
    "C2xC2xC2", "D4", "D5", "C12", "D6",
)


def catalog() -> dict[str, FiniteGroup]:
    """Named small groups (orders 1..12) used throughout tests and demos."""
    return {spec: build_group(spec) for spec in CATALOG_SPECS}
