"""GL2 extended affine Weyl group combinatorics for tame types and shapes.

Permutations of {1, 2} are the strings ``"id"`` and ``"w0"``.  An element
``w * t_nu`` of the extended affine Weyl group is a ``ShapeElement(w, nu)``;
translations compose as ``t_a w = w t_{w^{-1} a}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

ID = "id"
W0 = "w0"
PERMS = (ID, W0)


def cyc(j: int, n: int) -> int:
    """Index arithmetic on Z/n.  Every cyclic index in the package goes through here."""
    return j % n


def compose(*perms: str) -> str:
    odd = sum(1 for s in perms if s == W0) % 2
    return W0 if odd else ID


def act(perm: str, pair):
    """Permute the two coordinates of a pair (or apply to an index 1/2)."""
    if isinstance(pair, int):
        return pair if perm == ID else 3 - pair
    a, b = pair
    return (a, b) if perm == ID else (b, a)


@dataclass(frozen=True)
class ShapeElement:
    w: str
    nu: tuple

    def __mul__(self, other: "ShapeElement") -> "ShapeElement":
        # (w1 t_a)(w2 t_b) = w1 w2 t_{w2^{-1} a + b}
        a = act(other.w, self.nu)
        return ShapeElement(compose(self.w, other.w), tuple(x + y for x, y in zip(a, other.nu)))

    def inverse(self) -> "ShapeElement":
        # (w t_a)^{-1} = t_{-a} w^{-1} = w^{-1} t_{-w a}
        neg = act(self.w, self.nu)
        return ShapeElement(self.w, tuple(-x for x in neg))

    def __str__(self):
        return f"{self.w}*t{self.nu}"


def translation(nu) -> ShapeElement:
    return ShapeElement(ID, tuple(nu))


def perm_element(w: str) -> ShapeElement:
    return ShapeElement(w, (0, 0))


ETA = (1, 0)
ADMISSIBLE = {
    "t_eta": ShapeElement(ID, (1, 0)),
    "w0_t_eta": ShapeElement(W0, (1, 0)),
    "t_w0eta": ShapeElement(ID, (0, 1)),
}
SHAPE_NAMES = tuple(ADMISSIBLE)


def admissible_name(el: ShapeElement) -> str:
    for name, val in ADMISSIBLE.items():
        if val == el:
            return name
    raise ValueError(f"{el} is not in the admissible set of eta")


def shape_element(w_name: str, s: str, mu) -> ShapeElement:
    """z = w s^{-1} t_mu."""
    if w_name not in ADMISSIBLE:
        raise ValueError(f"shape entry {w_name!r} is not admissible; expected one of {SHAPE_NAMES}")
    return ADMISSIBLE[w_name] * perm_element(s) * translation(mu)


# -- type presentations ---------------------------------------------------

@dataclass(frozen=True)
class TypePresentation:
    p: int
    s: tuple
    mu: tuple

    def __post_init__(self):
        if len(self.s) != len(self.mu):
            raise ValueError("s and mu must have the same length")
        for x in self.s:
            if x not in PERMS:
                raise ValueError(f"bad permutation {x!r}")
        object.__setattr__(self, "s", tuple(self.s))
        object.__setattr__(self, "mu", tuple(tuple(m) for m in self.mu))

    @property
    def f(self) -> int:
        return len(self.s)

    @property
    def k(self) -> tuple:
        return tuple(a - b for a, b in self.mu)

    def is_small(self) -> bool:
        bound = (self.p + 1) // 2
        return all(0 <= k <= bound and (k or s == ID) for k, s in zip(self.k, self.s))

    def niveau(self) -> int:
        return self.f if compose(*self.s) == ID else 2 * self.f


def _reduce_k(tp_s, mu, p):
    """Shift mu by p*nu - s(pi nu) (sigma = id) until every |k_j| <= (p+1)/2."""
    f = len(mu)
    mu = [list(m) for m in mu]
    bound = (p + 1) // 2
    for _ in range(1000 * f + 1000):
        ks = [a - b for a, b in mu]
        bad = [j for j in range(f) if abs(ks[j]) > bound]
        if not bad:
            return [tuple(m) for m in mu]
        j = bad[0]
        # nu_j = (a, 0) changes k_j by p*a, and k_{j-1} by -(+-a)
        step = p
        if f == 1:
            step = p - (1 if tp_s[0] == ID else -1)
        a = -round(ks[j] / step)
        if a == 0:
            a = -1 if ks[j] > 0 else 1
        nu = [(0, 0)] * f
        nu[j] = (a, 0)
        for i in range(f):
            shifted = act(tp_s[i], nu[cyc(i + 1, f)])
            mu[i] = [mu[i][0] + p * nu[i][0] - shifted[0], mu[i][1] + p * nu[i][1] - shifted[1]]
    raise RuntimeError("presentation reduction did not terminate")


def ciao(tp: TypePresentation, sigma: Sequence[str], nu: Sequence[tuple]) -> TypePresentation:
    """The re-presentation (s, mu) -> (sigma s pi(sigma)^{-1}, sigma(mu) + p nu - sigma s pi(sigma)^{-1} pi(nu))."""
    f, p = tp.f, tp.p
    new_s = tuple(compose(sigma[j], tp.s[j], sigma[cyc(j + 1, f)]) for j in range(f))
    new_mu = []
    for j in range(f):
        a = act(sigma[j], tp.mu[j])
        b = act(new_s[j], nu[cyc(j + 1, f)])
        new_mu.append((a[0] + p * nu[j][0] - b[0], a[1] + p * nu[j][1] - b[1]))
    return TypePresentation(p, new_s, tuple(new_mu))


def central_twist(c, p: int) -> int:
    """Exponent n with tau(s, mu + (c_j, c_j)) = tau(s, mu) (x) omega_f^n.

    The weight p^j goes with index f - j, matching the character formulas.
    """
    f = len(c)
    return sum(p**j * c[cyc(f - j, f)] for j in range(f))


def small_presentation(tp: TypePresentation) -> tuple[TypePresentation, int]:
    """An equivalent small presentation with mu_{j,2} = 0, and n with tp = small (x) omega_f^n."""
    p, f = tp.p, tp.f
    mod = p**f - 1
    mu = _reduce_k(tp.s, tp.mu, p)
    # twist away the second coordinates
    n = central_twist([m[1] for m in mu], p)
    mu = [(a - b, 0) for a, b in mu]
    ks = [a for a, _ in mu]
    if not any(ks):
        # scalar type: the identity presentation realises it
        return TypePresentation(p, (ID,) * f, ((0, 0),) * f), n % mod
    # choose sigma: w0 where k < 0, and propagate backwards through zeros so s_j = id there
    sigma = [None] * f
    for j in range(f):
        if ks[j]:
            sigma[j] = W0 if ks[j] < 0 else ID
    for _ in range(f):
        for j in range(f - 1, -1, -1):
            if sigma[j] is None and sigma[cyc(j + 1, f)] is not None:
                sigma[j] = compose(sigma[cyc(j + 1, f)], tp.s[j])
    out = ciao(TypePresentation(p, tp.s, tuple(mu)), sigma, [(0, 0)] * f)
    n += central_twist([m[1] for m in out.mu], p)
    small = TypePresentation(p, out.s, tuple((a - b, 0) for a, b in out.mu))
    if not small.is_small():
        raise RuntimeError(f"small presentation failed for {tp}")
    return small, n % mod


@dataclass(frozen=True)
class Characters:
    """Exponents of the two characters: niveau f gives (gamma, gamma'), niveau 2f gives (h,)."""

    p: int
    f: int
    niveau: int
    values: tuple

    def twisted(self, n: int) -> "Characters":
        if self.niveau == self.f:
            mod = self.p**self.f - 1
            return Characters(self.p, self.f, self.niveau, tuple((v + n) % mod for v in self.values))
        mod = self.p ** (2 * self.f) - 1
        return Characters(self.p, self.f, self.niveau, ((self.values[0] + n * (self.p**self.f + 1)) % mod,))

    def same_type(self, other: "Characters") -> bool:
        if (self.p, self.f, self.niveau) != (other.p, other.f, other.niveau):
            return False
        if self.niveau == self.f:
            return sorted(self.values) == sorted(other.values)
        mod = self.p ** (2 * self.f) - 1
        h, h2 = self.values[0], other.values[0]
        return h2 in (h % mod, (h * self.p**self.f) % mod)

    def is_regular(self) -> bool:
        if self.niveau == self.f:
            return self.values[0] != self.values[1]
        return self.values[0] % (self.p**self.f + 1) != 0


def type_characters(tp: TypePresentation) -> Characters:
    p, f = tp.p, tp.f
    s, mu = tp.s, tp.mu
    partial = [compose(*s[: f - j]) for j in range(f)]  # prod_{i=0}^{f-1-j} s_i
    if compose(*s) == ID:
        mod = p**f - 1
        g1 = sum(p**j * mu[cyc(f - j, f)][act(partial[j], 1) - 1] for j in range(f))
        g2 = sum(p**j * mu[cyc(f - j, f)][act(partial[j], 2) - 1] for j in range(f))
        return Characters(p, f, f, (g1 % mod, g2 % mod))
    mod = p ** (2 * f) - 1
    first = sum(p**j * mu[cyc(f - j, f)][act(partial[j], 2) - 1] for j in range(f))
    second = sum(p**j * mu[cyc(f - j, f)][act(partial[j], 1) - 1] for j in range(f))
    h = (first + p**f * second) % mod
    if h % (p**f + 1) == 0:
        # omega_{2f}^h has niveau f: a scalar type written with a niveau 2f presentation
        g = (h // (p**f + 1)) % (p**f - 1)
        return Characters(p, f, f, (g, g))
    return Characters(p, f, 2 * f, (h,))


def order_of_product(s) -> int:
    return 1 if compose(*s) == ID else 2


def alphas(tp: TypePresentation) -> list[tuple]:
    """alpha_{k'} = (prod_{m'<k'} s_{f-1-m'}^{-1})(mu_{f-k'}) for k' in [0, rf)."""
    f = tp.f
    r = order_of_product(tp.s)
    out = []
    for kk in range(r * f):
        perm = compose(*(tp.s[cyc(f - 1 - m, f)] for m in range(kk)))
        out.append(act(perm, tp.mu[cyc(f - kk, f)]))
    return out


def orientation_vectors(tp: TypePresentation) -> list[tuple]:
    """a'^{(j')} = sum_{i'} alpha_{-j'+i'} p^{i'} for j' in Z/rf."""
    al = alphas(tp)
    n = len(al)
    p = tp.p
    out = []
    for jp in range(n):
        a = [0, 0]
        for ip in range(n):
            v = al[cyc(-jp + ip, n)]
            a[0] += v[0] * p**ip
            a[1] += v[1] * p**ip
        out.append(tuple(a))
    return out


class IrregularType(ValueError):
    pass


def orientation(tp: TypePresentation) -> tuple:
    """The 2f-tuple s'_orient making every a'^{(j')} strictly dominant after s'^{-1}."""
    if not tp.is_small():
        raise ValueError("orientation needs a small presentation")
    if not type_characters(tp).is_regular():
        raise IrregularType("scalar/irregular type")
    vecs = orientation_vectors(tp)
    n = len(vecs)
    res = []
    for a in vecs:
        if a[0] == a[1]:
            raise IrregularType("scalar/irregular type")
        res.append(ID if a[0] > a[1] else W0)
    f = tp.f
    return tuple(res[cyc(j, n)] for j in range(2 * f))


def orientation_is_normalized(tp: TypePresentation) -> bool:
    r = order_of_product(tp.s)
    return orientation(tp)[r * tp.f - 1] == ID


def partial_orientation(s, j: int) -> str:
    """s_orient,j = s_0 s_1 ... s_j."""
    return compose(*s[: j + 1])


# -- shapes -------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeData:
    p: int
    s: tuple
    mu: tuple
    w: tuple

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))
        object.__setattr__(self, "mu", tuple(tuple(m) for m in self.mu))
        object.__setattr__(self, "w", tuple(self.w))
        if not (len(self.s) == len(self.mu) == len(self.w)):
            raise ValueError("s, mu and w must all have length f")
        for x in self.w:
            if x not in ADMISSIBLE:
                raise ValueError(f"w entry {x!r} not one of {SHAPE_NAMES}")

    @property
    def f(self) -> int:
        return len(self.s)

    @property
    def k(self) -> tuple:
        return tuple(a - b for a, b in self.mu)

    @property
    def presentation(self) -> TypePresentation:
        return TypePresentation(self.p, self.s, self.mu)

    def z(self) -> list[ShapeElement]:
        return [shape_element(self.w[j], self.s[j], self.mu[j]) for j in range(self.f)]

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f, "s": list(self.s), "mu": [list(m) for m in self.mu], "w": list(self.w)}

    @classmethod
    def from_json(cls, d: dict) -> "ShapeData":
        return cls(d["p"], d["s"], d["mu"], d["w"])


class BranchError(ValueError):
    pass


# Table lookup for (v'_{j+f}, v'_j) before applying Sigma_j.
# Key: (w_{j+1} class, s_{j+1}, s_orient,j); value: pair as a function of k_{j+1}.
def _cell(w_name: str, s_next: str, s_or: str, k: int) -> tuple:
    translation_like = w_name in ("t_eta", "w0_t_eta")
    plain = (s_next == ID) == translation_like
    if s_or == ID:
        return (k + 1, 0) if plain else (k, 1)
    return (1, -k) if plain else (0, 1 - k)


def sigma_perms(shape: ShapeData) -> list[str]:
    """Sigma_j = prod_{i=1}^{j} z_i^{-1} (permutation parts), j = 0..f-1."""
    zs = shape.z()
    return [compose(*(zs[i].w for i in range(1, j + 1))) for j in range(shape.f)]


def vprime_pairs(shape: ShapeData) -> list[tuple]:
    """(v'_{j+f}, v'_j) for j = 0..f-1 via the table lookup."""
    f = shape.f
    sig = sigma_perms(shape)
    out = []
    for j in range(f):
        nxt = cyc(j + 1, f)
        cell = _cell(shape.w[nxt], shape.s[nxt], partial_orientation(shape.s, j), shape.k[nxt])
        out.append(act(sig[j], cell))
    return out


def vprime_tuple(shape: ShapeData, check_branch: bool = True) -> tuple:
    """The 2f-tuple (v'_0, ..., v'_{2f-1})."""
    if check_branch:
        require_gene_branch(shape)
    f = shape.f
    v = [0] * (2 * f)
    for j, (top, bottom) in enumerate(vprime_pairs(shape)):
        v[j + f] = top
        v[j] = bottom
    return tuple(v)


def lambda_by_product(shape: ShapeData) -> list[tuple]:
    """lambda_j read off from z_0 phi(z_{f-1}) ... phi^{f-1}(z_1) with p kept formal."""
    f = shape.f
    zs = shape.z()
    # translation parts are tuples of coefficient lists indexed by powers of p
    perm = ID
    trans = [[0] * f, [0] * f]
    for j in range(f):
        z = zs[cyc(f - j, f)]
        # multiply (perm, trans) by (z.w, p^j z.nu)
        moved = act(z.w, trans)
        trans = [list(moved[0]), list(moved[1])]
        trans[0][j] += z.nu[0]
        trans[1][j] += z.nu[1]
        perm = compose(perm, z.w)
    return [(trans[0][j], trans[1][j]) for j in range(f)]


def product_perm(shape: ShapeData) -> str:
    return compose(*(z.w for z in shape.z()))


def vprime_by_product(shape: ShapeData) -> tuple:
    """v' from the defining formula with lambda from the literal product."""
    f = shape.f
    lam = lambda_by_product(shape)
    k = shape.k
    v = [0] * (2 * f)
    for j in range(f):
        corr = k[cyc(f - j, f)] if partial_orientation(shape.s, f - 1 - j) != ID else 0
        v[2 * f - 1 - j] = lam[j][0] - corr
        v[f - 1 - j] = lam[j][1] - corr
    return tuple(v)


def rhobar_exponent(shape: ShapeData) -> int:
    """h of the residual representation: sum p^j (lambda_{j,1} + p^f lambda_{j,2}) mod p^{2f}-1."""
    p, f = shape.p, shape.f
    lam = lambda_by_product(shape)
    h = sum(p**j * (lam[j][0] + p**f * lam[j][1]) for j in range(f))
    return h % (p ** (2 * f) - 1)


def require_gene_branch(shape: ShapeData) -> None:
    """Check the standing assumptions under which a shape has a gene."""
    p, f = shape.p, shape.f
    tp = shape.presentation
    if not tp.is_small() or any(m[1] for m in tp.mu):
        raise BranchError("presentation must be small with mu_{j,2} = 0")
    if compose(*tp.s) != ID:
        raise BranchError("type must have niveau f (product of s_j is the identity)")
    if product_perm(shape) != W0:
        raise BranchError("product of z_j must be w0 (irreducible residual representation)")
    lam = lambda_by_product(shape)
    det_type = sum(p**j * sum(tp.mu[cyc(f - j, f)]) for j in range(f))
    det_rho = sum(p**j * (lam[j][0] + lam[j][1]) for j in range(f))
    if (det_rho - det_type - sum(p**j for j in range(f))) % (p**f - 1):
        raise BranchError("determinant congruence fails")
    if rhobar_exponent(shape) % (p**f + 1) == 0:
        raise BranchError("residual exponent is divisible by p^f + 1")
    if not type_characters(tp).is_regular():
        raise BranchError("type is not regular")


def in_gene_branch(shape: ShapeData) -> bool:
    try:
        require_gene_branch(shape)
    except BranchError:
        return False
    return True


def small_shapes(p: int, f: int, kmax: int):
    """All shapes with small presentation, mu_{j,2} = 0 and k_j <= kmax."""
    local = []
    for k in range(kmax + 1):
        for s in PERMS:
            if k == 0 and s != ID:
                continue
            for w in SHAPE_NAMES:
                local.append((w, s, k))
    for combo in product(local, repeat=f):
        yield ShapeData(p, tuple(c[1] for c in combo), tuple((c[2], 0) for c in combo), tuple(c[0] for c in combo))
