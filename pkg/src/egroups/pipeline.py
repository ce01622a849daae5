"""End-to-end recognition and isomorphism testing for order-q^9 tensors.

recognize() takes a prime-field alternating tensor and either refuses it
with a diagnostic status or produces the curve-with-point data (E, P), a
canonical class key, and a checker-verified pseudo-isometry from the input
to the reference tensor of (E, P).  iso_coset() compares two recognized
tensors and, when they are isomorphic, assembles an explicit witness from
three adjoint-module elements together with a generating set for the
pseudo-isometry group of the source.

Every transform that leaves this module has passed verify_pseudo_isometry;
there is no tolerance anywhere.
"""

import numpy as np

from .ecurve import (ECPoint, EllipticCurve, galois_group_EP, iso_with_point,
                     translation_matrix)
from .egroup import (b_matrix, flat_matrix, flatten_to_prime,
                     frobenius_flat_block, j_matrix)
from .errors import (EGroupsError, NoPointFound, NotAFlex,
                     SingularAfterNormalize)
from .fields import field_make
from .forms import (LinearFormMatrix, pfaffian6, rational_flexes,
                    weierstrass_normalize)
from .linalg import ExactMatrix, inverse, is_invertible
from .tensor import (StarType, TensorHandle, adjoint, adjoint_module,
                     centroid_field_rewrite, isotropic_decomposition,
                     star_type, verify_pseudo_isometry)

STATUS_ELLIPTIC = "Elliptic"
STATUS_NOT_CLASS2 = "NotClass2Shape"
STATUS_CENTROID_NOT_FIELD = "CentroidNotField"
STATUS_WRONG_DIMS = "WrongDims"
STATUS_PFAFFIAN_SINGULAR = "PfaffianSingular"
STATUS_NO_RATIONAL_FLEX = "NoRationalFlex"
STATUS_NOT_DECOMPOSABLE = "NotDecomposable"


class PseudoIsometry:
    """Checker-verified prime-field pseudo-isometry pair.

    P_V and P_T are matrices over GF(p); an optional F-semilinear
    decomposition (X, Z, sigma_power) is attached when the map came from a
    single semilinear step.
    """

    __slots__ = ("P_V", "P_T", "X", "Z", "sigma_power")

    def __init__(self, P_V: ExactMatrix, P_T: ExactMatrix,
                 X=None, Z=None, sigma_power=None):
        self.P_V = P_V
        self.P_T = P_T
        self.X = X
        self.Z = Z
        self.sigma_power = sigma_power

    def compose(self, other: "PseudoIsometry") -> "PseudoIsometry":
        """self after other (other's target feeds self's source)."""
        return PseudoIsometry(self.P_V @ other.P_V, self.P_T @ other.P_T)

    def inverse(self) -> "PseudoIsometry":
        return PseudoIsometry(inverse(self.P_V), inverse(self.P_T))

    def verify(self, s: TensorHandle, t: TensorHandle) -> bool:
        return verify_pseudo_isometry(s, t, self.P_V, self.P_T)

    def to_json(self):
        out = {"P_V": self.P_V.a.tolist(), "P_T": self.P_T.a.tolist()}
        if self.sigma_power is not None:
            out["sigma_power"] = self.sigma_power
        return out


def _pair(F_p, PV, PT, **kw):
    return PseudoIsometry(ExactMatrix(F_p, PV), ExactMatrix(F_p, PT), **kw)


def canonical_key(F, a, b, lam, mu):
    """Lex-least (a, b, lam, mu) code tuple over u-scaling and Frobenius."""
    best = None
    for k in range(F.e):
        sa = F.frobenius(a, k)
        sb = F.frobenius(b, k)
        sl = F.frobenius(lam, k)
        sm = F.frobenius(mu, k)
        for u in F.units():
            u2 = F.mul(u, u)
            u3 = F.mul(u2, u)
            cand = (F.mul(F.mul(u2, u2), sa), F.mul(F.mul(u3, u3), sb),
                    F.mul(u2, sl), F.mul(u3, sm))
            if best is None or cand < best:
                best = cand
    return best


class RecognitionReport:
    __slots__ = ("status", "field", "curve", "point", "star", "wtransform",
                 "decomposition", "N", "module_element", "chain", "key",
                 "tensor")

    def __init__(self, status, **kw):
        self.status = status
        for name in self.__slots__[1:]:
            setattr(self, name, kw.get(name))

    @property
    def ok(self):
        return self.status == STATUS_ELLIPTIC

    def summary(self):
        out = {"status": self.status}
        if self.ok:
            F = self.field
            out["field"] = F.to_json()
            out["a"] = F.to_coeffs(self.curve.a)
            out["b"] = F.to_coeffs(self.curve.b)
            out["point"] = self.point.to_json(F)
            out["star_type"] = self.star.kind
            out["canonical_key"] = [F.to_coeffs(c) for c in self.key]
            out["weierstrass"] = {"Z": self.wtransform.Z.to_json(),
                                  "scale": F.to_coeffs(self.wtransform.scale)}
        return out


def recover_point(N: LinearFormMatrix, E: EllipticCurve):
    """The unique affine P with Adj(J_{E,P}, N) nonzero, plus the element.

    Scans E(F) in canonical point order; existence is guaranteed when
    det(N) cuts out E in short Weierstrass form.
    """
    for P in E.affine_points():
        mod = adjoint_module(j_matrix(E, P), N)
        if mod:
            return P, mod[0]
    raise NoPointFound("no curve point matches the normalized 3x3 block")


def recognize(t: TensorHandle, seed: int = 0) -> RecognitionReport:
    """Decide whether t is the tensor of an elliptic group; recover (E, P)."""
    if not t.is_alternating():
        return RecognitionReport(STATUS_NOT_CLASS2, tensor=t)
    if not (t.radical_is_trivial() and t.is_full()):
        return RecognitionReport(STATUS_NOT_CLASS2, tensor=t)
    rw = centroid_field_rewrite(t, seed)
    if not rw.ok:
        status = (STATUS_WRONG_DIMS if rw.reason == "WrongShape"
                  else STATUS_CENTROID_NOT_FIELD)
        return RecognitionReport(status, tensor=t)
    F = rw.field
    B_F = rw.b_matrix
    F_p = t.field

    pf = pfaffian6(B_F)
    if pf.is_zero():
        return RecognitionReport(STATUS_PFAFFIAN_SINGULAR, field=F, tensor=t)
    flexes = rational_flexes(pf)
    try:
        wt = weierstrass_normalize(pf, flexes[0]) if flexes else None
    except (NotAFlex, SingularAfterNormalize):
        return RecognitionReport(STATUS_PFAFFIAN_SINGULAR, field=F, tensor=t)
    if wt is None:
        from .forms import is_smooth
        if is_smooth(pf):
            return RecognitionReport(STATUS_NO_RATIONAL_FLEX, field=F, tensor=t)
        return RecognitionReport(STATUS_PFAFFIAN_SINGULAR, field=F, tensor=t)

    X6 = isotropic_decomposition(B_F, seed)
    if X6 is None:
        return RecognitionReport(STATUS_NOT_DECOMPOSABLE, field=F, tensor=t)
    D = B_F.congruence(X6, X6)
    M = LinearFormMatrix(F, D.slices[:, :3, 3:].copy())
    N = M.substitute(wt.Z)

    E = EllipticCurve(F, wt.a, wt.b)
    P, (A, Bmod) = recover_point(N, E)
    a_st = star_type(adjoint(B_F, check_closure=False), seed)

    # chain: input -> flat(B_F) -> D -> B_N -> flat(B_{E,P})
    chain = _pair(F_p, inverse(rw.S).a, inverse(rw.Q).a)
    step3 = _pair(F_p, flat_matrix(F, inverse(X6)).a,
                  np.eye(3 * F.e, dtype=np.int64))
    chain = step3.compose(chain)
    step4 = _pair(F_p, np.eye(6 * F.e, dtype=np.int64),
                  flat_matrix(F, wt.Z.T).a)
    chain = step4.compose(chain)
    W5 = np.zeros((6, 6), dtype=np.int64)
    W5[:3, :3] = A
    W5[3:, 3:] = inverse(ExactMatrix(F, Bmod)).a
    step5 = _pair(F_p, flat_matrix(F, inverse(ExactMatrix(F, W5))).a,
                  np.eye(3 * F.e, dtype=np.int64))
    chain = step5.compose(chain)

    ref = flatten_to_prime(b_matrix(E, P))
    assert chain.verify(t, ref), "recognition chain failed the checker"

    key = canonical_key(F, E.a, E.b, P.x, P.y)
    return RecognitionReport(
        STATUS_ELLIPTIC, field=F, curve=E, point=P, star=a_st, wtransform=wt,
        decomposition=X6, N=N, module_element=(A, Bmod), chain=chain, key=key,
        tensor=t)


# -- pseudo-isometry group generators -----------------------------------------


def _autotopism_from_module(F, J, Zmat):
    """Triple (X, Y, Z) with X^T J(y) Y = J(Z y) built from Adj(J, J(Zy))."""
    mod = adjoint_module(J, J.substitute(Zmat))
    assert len(mod) == 1, "autotopism module is not 1-dimensional"
    A, B = mod[0]
    Am = ExactMatrix(F, A)
    Bm = ExactMatrix(F, B)
    assert is_invertible(Am) and is_invertible(Bm)
    X = inverse(Am)
    return X, Bm, Zmat


def _lift_autotopism(F, F_p, X, Y, Z):
    """Pseudo-isometry of B = [[0,J],[-J^T,0]] from an autotopism of J."""
    W = np.zeros((6, 6), dtype=np.int64)
    W[:3, :3] = X.a
    W[3:, 3:] = Y.a
    return _pair(F_p, flat_matrix(F, ExactMatrix(F, W)).a,
                 flat_matrix(F, Z.T).a)


def psi_isom_generators(E: EllipticCurve, P: ECPoint, seed: int = 0):
    """Generating set for the F-linear pseudo-isometries of B_{E,P}.

    Y1: point-stabilizing curve automorphisms, translations by rational
    3-torsion, and the two scalar families with a primitive element.
    Y2: the GL2 block family when P is 2-torsion, else the block-swap
    element.  Every generator is returned as a verified prime-field pair.
    """
    F = E.field
    F_p = field_make(F.p)
    J = j_matrix(E, P)
    ref = flatten_to_prime(b_matrix(E, P))
    gens = []

    def push(pair, tag):
        assert pair.verify(ref, ref), f"generator {tag} failed the checker"
        gens.append((tag, pair))

    # stabilizer automorphisms
    for w, Om in E.aut_O():
        if w == 1:
            continue
        u2 = F.mul(w, w)
        u3 = F.mul(u2, w)
        if not (F.mul(u2, P.x) == P.x and F.mul(u3, P.y) == P.y):
            continue
        X, Y, Z = _autotopism_from_module(F, J, Om)
        push(_lift_autotopism(F, F_p, X, Y, Z), f"aut_O(w={w})")

    # translations by rational 3-torsion
    for Q in E.torsion(3):
        if Q.inf:
            continue
        tau = translation_matrix(E, Q)
        X, Y, Z = _autotopism_from_module(F, J, tau)
        push(_lift_autotopism(F, F_p, X, Y, Z), f"translation({Q})")

    # scalar families
    a = F.generator()
    aI = ExactMatrix(F, np.diag([a, a, a]).astype(np.int64))
    I3 = ExactMatrix.identity(F, 3)
    push(_lift_autotopism(F, F_p, aI, I3, aI), "scalar(aI,I)")
    push(_lift_autotopism(F, F_p, I3, aI, aI), "scalar(I,aI)")

    if P.y == 0:
        # GL2 block family on the symmetric representative; entries are codes
        gl2_gens = [np.array([[1, 1], [0, 1]]), np.array([[1, 0], [1, 1]]),
                    np.array([[a, 0], [0, 1]])]
        for g in gl2_gens:
            W = np.zeros((6, 6), dtype=np.int64)
            for r in range(2):
                for c in range(2):
                    W[3 * r:3 * r + 3, 3 * c:3 * c + 3] = (
                        int(g[r, c]) * np.eye(3, dtype=np.int64))
            gmat = ExactMatrix(F, W)
            det2 = F.sub(F.mul(int(g[0, 0]), int(g[1, 1])),
                         F.mul(int(g[0, 1]), int(g[1, 0])))
            PT = ExactMatrix(F, np.diag([det2] * 3).astype(np.int64))
            push(_pair(F_p, flat_matrix(F, gmat).a, flat_matrix(F, PT).a),
                 f"gl2({g.tolist()})")
    else:
        X0 = ExactMatrix(F, np.diag([F.neg(1), 1, 1]).astype(np.int64))
        Z0 = ExactMatrix(F, np.diag([F.neg(1), 1, F.neg(1)]).astype(np.int64))
        W = np.zeros((6, 6), dtype=np.int64)
        W[:3, 3:] = X0.a
        W[3:, :3] = X0.a
        push(_pair(F_p, flat_matrix(F, ExactMatrix(F, W)).a,
                   flat_matrix(F, Z0).a), "swap")
    return gens


# -- order formulas -------------------------------------------------------------


class FactoredOrder:
    """|Aut| bookkeeping: q^18 * galois * torsion3 * aut_ratio * tail."""

    __slots__ = ("q", "q_power", "galois", "torsion3", "aut_ratio",
                 "tail_kind", "tail_value")

    def __init__(self, q, q_power, galois, torsion3, aut_ratio,
                 tail_kind, tail_value):
        self.q = q
        self.q_power = q_power
        self.galois = galois
        self.torsion3 = torsion3
        self.aut_ratio = aut_ratio
        self.tail_kind = tail_kind
        self.tail_value = tail_value

    @property
    def value(self):
        return (self.q ** self.q_power * self.galois * self.torsion3
                * self.aut_ratio * self.tail_value)

    def to_json(self):
        return {"q_power": self.q_power, "galois": self.galois,
                "torsion3": self.torsion3, "aut_ratio": self.aut_ratio,
                "tail": self.tail_kind, "value": str(self.value)}

    def __repr__(self):
        return (f"{self.q}^{self.q_power} * {self.galois} * {self.torsion3}"
                f" * {self.aut_ratio} * {self.tail_value} = {self.value}")


def psi_isom_order(E: EllipticCurve, P: ECPoint) -> FactoredOrder:
    """|PsiIsom_F(B_{E,P})| in factored form (no group enumeration)."""
    q = E.field.q
    aut = len(E.aut_O())
    orbit = len(E.orbit_of_point(P))
    t3 = len(E.torsion(3))
    if P.y == 0 and not P.inf:
        tail_kind = "GL2"
        tail = (q * q - 1) * (q * q - q)
    else:
        tail_kind = "2(q-1)^2"
        tail = 2 * (q - 1) ** 2
    return FactoredOrder(q, 0, 1, t3, aut // orbit, tail_kind, tail)


def aut_order(E: EllipticCurve, P: ECPoint) -> FactoredOrder:
    """|Aut(G_{E,P}(F))| = q^18 * |Gal_{E,P}| * |PsiIsom_F(B_{E,P})|."""
    base = psi_isom_order(E, P)
    gal = len(galois_group_EP(E, P))
    return FactoredOrder(E.field.q, 18, gal, base.torsion3, base.aut_ratio,
                         base.tail_kind, base.tail_value)


# -- isomorphism coset -----------------------------------------------------------


class IsoCoset:
    __slots__ = ("witness", "generators", "galois_part")

    def __init__(self, witness, generators, galois_part):
        self.witness = witness
        self.generators = generators
        self.galois_part = galois_part


def _frobenius_pair(F, k):
    F_p = field_make(F.p)
    return PseudoIsometry(frobenius_flat_block(F, 6, k),
                          frobenius_flat_block(F, 3, k), sigma_power=k)


def iso_coset(t1: TensorHandle, t2: TensorHandle, seed: int = 0,
              rep1: RecognitionReport = None, rep2: RecognitionReport = None):
    """The coset of prime-field pseudo-isometries t1 -> t2, or None.

    The witness is assembled from three adjoint-module elements: the two
    recognition elements identifying N_i with J_{E_i,P_i}, and a third
    element tying J_{E2,P2} to the twisted-and-rescaled J of the source;
    the Galois step enters as a coefficientwise Frobenius pair.  Everything
    is validated by the checker before being returned.
    """
    rep1 = rep1 if rep1 is not None else recognize(t1, seed)
    rep2 = rep2 if rep2 is not None else recognize(t2, seed)
    if not (rep1.ok and rep2.ok):
        return None
    F = rep1.field
    if rep2.field != F:
        return None  # non-isomorphic centroids cannot be pseudo-isometric
    E1, P1 = rep1.curve, rep1.point
    E2, P2 = rep2.curve, rep2.point

    for k in range(F.e):
        iso = iso_with_point(E1, P1, E2, P2, k)
        if iso is None:
            continue
        u = iso.u
        sE = E1.galois_image(k)
        sP = E1.galois_point(P1, k)
        F_p = field_make(F.p)

        ref1 = flatten_to_prime(b_matrix(E1, P1))
        refs = flatten_to_prime(b_matrix(sE, sP))
        ref2 = flatten_to_prime(b_matrix(E2, P2))

        frob = _frobenius_pair(F, k)
        assert frob.verify(ref1, refs), "Frobenius pair failed the checker"

        u2 = F.mul(u, u)
        u3 = F.mul(u2, u)
        phi = ExactMatrix(F, np.diag([F.inv(u2), F.inv(u3), 1])
                          .astype(np.int64))
        J2 = j_matrix(E2, P2)
        Js = j_matrix(sE, sP)
        mod = adjoint_module(J2, Js.substitute(phi))
        assert len(mod) == 1, "cross adjoint module is not 1-dimensional"
        X3, Y3 = mod[0]
        W3 = np.zeros((6, 6), dtype=np.int64)
        W3[:3, :3] = inverse(ExactMatrix(F, X3)).a
        W3[3:, 3:] = Y3
        middle = _pair(F_p, flat_matrix(F, ExactMatrix(F, W3)).a,
                       flat_matrix(F, phi.T).a)
        assert middle.verify(refs, ref2), "twist-scale pair failed the checker"

        witness = rep2.chain.inverse().compose(
            middle.compose(frob.compose(rep1.chain)))
        witness.sigma_power = k
        assert witness.verify(t1, t2), "assembled witness failed the checker"

        gens = []
        inv_chain = rep1.chain.inverse()
        for tag, g in psi_isom_generators(E1, P1, seed):
            conj = inv_chain.compose(g.compose(rep1.chain))
            assert conj.verify(t1, t1), f"conjugated generator {tag} failed"
            gens.append((tag, conj))
        return IsoCoset(witness, gens, galois_group_EP(E1, P1))
    return None
