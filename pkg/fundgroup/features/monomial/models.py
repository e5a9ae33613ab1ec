from dataclasses import dataclass
from typing import List, Tuple

from fundgroup.domain.errors import ParseError
from fundgroup.domain.models import ResultStatus
from fundgroup.domain.types import PermWord
from fundgroup.features.scalars.models import ONE, ExactScalar


@dataclass(frozen=True)
class Permutation:
    """
    Bijection of {0..n-1}; image[i] = sigma(i). Displayed 1-based in cycle notation.
    """

    image: PermWord

    def __post_init__(self) -> None:
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"{self.image} is not a permutation")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.image)

    @property
    def is_identity(self) -> bool:
        return all(i == s for i, s in enumerate(self.image))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def then(self, other: "Permutation") -> "Permutation":
        """i -> other(self(i))."""
        return Permutation(tuple(other.image[s] for s in self.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, s in enumerate(self.image):
            inv[s] = i
        return Permutation(tuple(inv))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            nxt = self.image[start]
            while nxt != start:
                cycle.append(nxt)
                seen[nxt] = True
                nxt = self.image[nxt]
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def text(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles)

    @staticmethod
    def parse(text: str, n: int) -> "Permutation":
        text = text.strip()
        if text in ("", "()", "e", "id"):
            return Permutation.identity(n)
        image = list(range(n))
        body = text.replace(")(", ")|(").split("|")
        for chunk in body:
            chunk = chunk.strip()
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise ParseError(f"bad cycle '{chunk}'")
            try:
                points = [int(x) - 1 for x in chunk[1:-1].replace(",", " ").split()]
            except ValueError:
                raise ParseError(f"bad cycle '{chunk}'") from None
            if any(p < 0 or p >= n for p in points) or len(set(points)) != len(points):
                raise ParseError(f"cycle '{chunk}' does not fit {n} points")
            for a, b in zip(points, points[1:] + points[:1]):
                image[a] = b
        try:
            return Permutation(tuple(image))
        except ValueError:
            raise ParseError(f"'{text}' is not a permutation of {n} points") from None


@dataclass(frozen=True)
class MonomialMatrix:
    """
    D·U(sigma) with U(sigma)_{ij} = [j = sigma(i)]: (M e)_i = d_i * e_{sigma(i)}.
    """

    perm: Permutation
    diag: Tuple[ExactScalar, ...]

    def __post_init__(self) -> None:
        if len(self.diag) != self.perm.n:
            raise ValueError("diagonal and permutation sizes differ")

    @property
    def n(self) -> int:
        return self.perm.n

    @property
    def is_diagonal(self) -> bool:
        return self.perm.is_identity

    @property
    def is_identity(self) -> bool:
        return self.perm.is_identity and all(d == ONE for d in self.diag)

    def entry(self, i: int, j: int) -> ExactScalar:
        return self.diag[i] if self.perm(i) == j else ExactScalar()

    def text(self) -> str:
        return f"perm={self.perm.text()} diag={','.join(str(d) for d in self.diag)}"


@dataclass(frozen=True)
class MonomialGroupDesc:
    """
    Finite description of a monomial matrix group.

    diag_gens generate N = G ∩ diagonals; coset_reps holds one element per permutation
    in the image of G, sorted by permutation word, the identity represented by I.
    """

    n: int
    diag_gens: Tuple[Tuple[ExactScalar, ...], ...]
    coset_reps: Tuple[MonomialMatrix, ...]

    @property
    def permutations(self) -> Tuple[Permutation, ...]:
        return tuple(r.perm for r in self.coset_reps)

    @property
    def order_of_permutation_image(self) -> int:
        return len(self.coset_reps)

    def rep_for(self, perm: Permutation) -> MonomialMatrix | None:
        for r in self.coset_reps:
            if r.perm == perm:
                return r
        return None


@dataclass(frozen=True)
class WeightedIsoResult:
    status: ResultStatus
    matrix: MonomialMatrix | None = None
    reason: str = ""
