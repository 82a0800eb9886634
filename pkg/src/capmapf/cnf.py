"""CNF construction: semantic variable keys, clause store, cardinality encodings, DIMACS.

Variable keys are plain tuples:
    ("X", agent, vertex, t)        agent occupies vertex at step t
    ("E", agent, u, v, t)          agent traverses u->v between t and t+1
    ("aux", tag, n)                auxiliary (cardinality counters, settled flags, ...)
Literals are nonzero signed ints in DIMACS convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

VERTEX = "X"
EDGE = "E"
AUX = "aux"

VarKey = tuple


def var_key_vertex(agent: int, vertex: int, t: int) -> VarKey:
    return (VERTEX, agent, vertex, t)


def var_key_edge(agent: int, u: int, v: int, t: int) -> VarKey:
    return (EDGE, agent, u, v, t)


@dataclass
class CnfFormula:
    """Single-owner mutable builder for a CNF formula."""

    variable_count: int = 0
    clauses: list[list[int]] = field(default_factory=list)
    _index: dict[VarKey, int] = field(default_factory=dict)
    _keys: list[VarKey | None] = field(default_factory=lambda: [None])  # 1-based

    def allocate(self, key: VarKey) -> int:
        """Idempotent: the same key always maps to the same variable."""
        idx = self._index.get(key)
        if idx is None:
            self.variable_count += 1
            idx = self.variable_count
            self._index[key] = idx
            self._keys.append(key)
        return idx

    def lookup(self, key: VarKey) -> int | None:
        return self._index.get(key)

    def key_of(self, index: int) -> VarKey:
        return self._keys[index]

    def new_aux(self, tag: str) -> int:
        return self.allocate((AUX, tag, self.variable_count + 1))

    def add(self, clause: list[int]) -> None:
        if not clause:
            raise ValueError("empty clause")
        for lit in clause:
            if lit == 0 or abs(lit) > self.variable_count:
                raise ValueError(f"literal {lit} references an unallocated variable")
        self.clauses.append(list(clause))

    def add_all(self, clauses: list[list[int]]) -> None:
        for c in clauses:
            self.add(c)


def at_most_one_pairwise(lits: list[int]) -> list[list[int]]:
    """Binary clauses forbidding every pair; n*(n-1)/2 clauses, no auxiliaries."""
    n = len(lits)
    return [[-lits[i], -lits[j]] for i in range(n) for j in range(i + 1, n)]


def at_most_k(formula: CnfFormula, lits: list[int], k: int) -> list[list[int]]:
    """Sequential-counter clauses bounding the number of true lits by k.

    Auxiliary variables are allocated in `formula`; the returned clauses are
    NOT added (the caller may post or guard them).  Projections of the
    emitted clauses' models onto lits are exactly the <=k-true assignments.
    """
    n = len(lits)
    if k < 0:
        raise ValueError("k must be >= 0")
    if k >= n:
        return []
    if k == 0:
        return [[-x] for x in lits]
    if k == 1 and n <= 6:
        return at_most_one_pairwise(lits)

    # s[i][j] true <=> at least j+1 of lits[0..i] are true (Sinz 2005)
    s = [[formula.new_aux("seq") for _ in range(k)] for _ in range(n - 1)]
    clauses: list[list[int]] = [[-lits[0], s[0][0]]]
    for j in range(1, k):
        clauses.append([-s[0][j]])
    for i in range(1, n - 1):
        clauses.append([-lits[i], s[i][0]])
        clauses.append([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            clauses.append([-lits[i], -s[i - 1][j - 1], s[i][j]])
            clauses.append([-s[i - 1][j], s[i][j]])
        clauses.append([-lits[i], -s[i - 1][k - 1]])
    clauses.append([-lits[n - 1], -s[n - 2][k - 1]])
    return clauses


def _key_to_comment(idx: int, key: VarKey) -> str:
    return f"c var {idx} " + " ".join(str(f) for f in key)


def _comment_to_key(tokens: list[str]) -> VarKey:
    def conv(tok: str):
        try:
            return int(tok)
        except ValueError:
            return tok

    return tuple(conv(t) for t in tokens)


def to_dimacs(formula: CnfFormula) -> str:
    """Standard DIMACS CNF; `c var` comment lines carry the key map."""
    out = []
    for idx in range(1, formula.variable_count + 1):
        key = formula.key_of(idx)
        if key is not None:
            out.append(_key_to_comment(idx, key))
    out.append(f"p cnf {formula.variable_count} {len(formula.clauses)}")
    for clause in formula.clauses:
        out.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF, restoring the key map from `c var` comments."""
    formula = CnfFormula()
    keyed: dict[int, VarKey] = {}
    n_vars = None
    lits: list[int] = []
    pending: list[list[int]] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            tokens = line.split()
            if len(tokens) >= 3 and tokens[1] == "var":
                keyed[int(tokens[2])] = _comment_to_key(tokens[3:])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {ln}: malformed problem line {line!r}")
            n_vars = int(parts[2])
            continue
        if n_vars is None:
            raise ValueError(f"line {ln}: clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                pending.append(lits)
                lits = []
            else:
                lits.append(lit)
    if lits:
        raise ValueError("trailing clause without terminating 0")
    if n_vars is None:
        raise ValueError("missing problem line")
    for idx in range(1, n_vars + 1):
        formula.allocate(keyed.get(idx, (AUX, "dimacs", idx)))
    for clause in pending:
        formula.add(clause)
    return formula
