"""Local type of a newform at p from (N_p, C_p), and the inducing field when
the twist of the global root number by the quadratic character is known."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from sympy import isprime, legendre_symbol

from .cyclotomic import fixed_generator
from .residue import LocalField, quad_ext_representatives, unramified_t

# the three quadratic characters of Q ramified only at 2, by discriminant
P2_DISCRIMINANTS = {-1: -4, 2: 8, -2: -8}
NON_DIHEDRAL_N2 = (3, 4, 6, 7)
P2_TABLE = {
    # (2-minimal, relation) -> t with K = Q_2(sqrt t)
    (True, "I"): (-1, -2, 2, 3),
    (True, "II"): (-6, 6),
    (False, "I"): (-1, -2, 2, -6, 6),
    (False, "II"): (3,),
}


class InvalidDatum(ValueError):
    pass


@dataclass(frozen=True)
class NewformLocalDatum:
    p: int
    Np: int
    Cp: int
    minimal: bool | None = None
    weight: int | None = None
    ap: str | None = None
    epsF: int | None = None
    epsFtwist: int | dict | None = None
    Nprime_factors: dict | None = None

    def __post_init__(self):
        if not isprime(self.p):
            raise InvalidDatum(f"{self.p} is not prime")
        if self.Np < 0 or self.Cp < 0:
            raise InvalidDatum("N_p and C_p must be non-negative")
        if self.Cp > self.Np:
            raise InvalidDatum(f"C_p = {self.Cp} exceeds N_p = {self.Np}")
        if self.Nprime_factors is not None:
            facs = {int(q): int(e) for q, e in self.Nprime_factors.items()}
            if self.p in facs:
                raise InvalidDatum("N' must be prime to p")
            object.__setattr__(self, "Nprime_factors", facs)

    @classmethod
    def from_json(cls, line: str | dict) -> "NewformLocalDatum":
        rec = json.loads(line) if isinstance(line, str) else dict(line)
        known = {f for f in cls.__dataclass_fields__}
        extra = set(rec) - known
        if extra:
            raise InvalidDatum(f"unknown fields: {sorted(extra)}")
        try:
            return cls(**rec)
        except TypeError as e:
            raise InvalidDatum(str(e)) from None


@dataclass
class LocalTypeReport:
    type: str
    candidates: list = field(default_factory=list)
    possibly_non_dihedral: bool = False
    epsilon_p: str | None = None
    reasoning: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# conductors and parity


def _as_field(K) -> LocalField:
    if isinstance(K, LocalField):
        return K
    if isinstance(K, tuple):
        return LocalField(*K)
    return K.field


def conductor_of_induced(K, a_chi: int) -> int:
    """a(Ind chi) = v_p(disc K) + f a(chi)."""
    K = _as_field(K)
    if a_chi < 1:
        raise ValueError("an admissible chi is ramified")
    if K.ramified and a_chi < 2:
        raise ValueError("a(chi) = 1 is not admissible for ramified K")
    return K.d + K.f * a_chi


def chi_conductor_parity(p: int, d: int, minimal: bool) -> str:
    """Parity of a(chi) for ramified K with discriminant valuation d.

    Odd p: minimal gives a even.  p = 2 (with l(chi) >= d): minimal gives a
    odd for d = 2 and even for d = 3, the other way round otherwise.
    """
    if p != 2:
        return "even" if minimal else "odd"
    if d not in (2, 3):
        raise ValueError("d must be 2 or 3 at p = 2")
    odd = (d == 2) == minimal
    return "odd" if odd else "even"


def parity_characterize(p: int, ramified: bool, minimal: bool | None = None,
                        level_at_least_d: bool | None = None) -> str:
    """Parity of N_p for a dihedral supercuspidal with the given inducing data."""
    if not ramified:
        return "even"
    if minimal is None:
        raise ValueError("the minimality flag is required for ramified K")
    if p == 2 and level_at_least_d is None:
        raise ValueError("p = 2 needs the l(chi) >= d hypothesis flag")
    if p == 2 and not level_at_least_d:
        raise ValueError("parity is only claimed when l(chi) >= d")
    return "odd" if minimal else "even"


# ---------------------------------------------------------------------------
# global root numbers


def chi_of_nprime(p: int, factors: dict | None, t: int | None = None) -> int:
    """chi_p(N') = prod (q/p)^N_q for odd p; chi_t(N') via the Kronecker symbol at p = 2."""
    if factors is None:
        raise ValueError("N' must be given in factored form")
    out = 1
    for q, e in factors.items():
        q, e = int(q), int(e)
        if q == p or not isprime(q):
            raise ValueError(f"bad prime factor {q} of N'")
        if p == 2:
            D = P2_DISCRIMINANTS[-1 if t is None else t]
            s = int(legendre_symbol(D % q, q))
        else:
            s = int(legendre_symbol(q % p, p))
        out *= s**e
    return out


def global_epsilon_relation(eps_f: int, chi_p_of_nprime: int, eps_p: int) -> int:
    """eps(f x chi_p) = eps(f) chi_p(N') eps_p."""
    for v in (eps_f, chi_p_of_nprime, eps_p):
        if v not in (1, -1):
            raise ValueError("root numbers here are +-1")
    return eps_f * chi_p_of_nprime * eps_p


def _twist_eps(d: NewformLocalDatum, t: int | None = None) -> int | None:
    tw = d.epsFtwist
    if isinstance(tw, dict):
        key = str(-1 if t is None else t)
        tw = tw.get(key, tw.get(int(key)))
    return tw


def derived_eps_p(d: NewformLocalDatum, t: int | None = None) -> int:
    """eps_p read off from eps(f), eps(f x chi) and N'."""
    tw = _twist_eps(d, t)
    if d.epsF is None or tw is None:
        raise ValueError("global root numbers eps(f) and eps(f x chi_p) are required")
    return tw * chi_of_nprime(d.p, d.Nprime_factors, t) * d.epsF


# ---------------------------------------------------------------------------
# classification


def _name(p: int, t: int) -> str:
    return f"Q_{p}(sqrt {t})"


def _unramified(p: int) -> dict:
    return {"t": unramified_t(p), "name": _name(p, unramified_t(p)), "ramified": False}


def _ramified_odd(p: int) -> list[dict]:
    """Q_p(sqrt -p) and Q_p(sqrt -p zeta_(p-1)), with square-class representatives."""
    g = fixed_generator(p)
    out = []
    for label, u in ((f"Q_{p}(sqrt -{p})", -1), (f"Q_{p}(sqrt -{p} zeta_{p - 1})", -g)):
        rep = p if legendre_symbol(u % p, p) == 1 else p * unramified_t(p)
        out.append({"t": rep, "name": label, "ramified": True, "t_generator": u * p})
    return out


def _ramified_two(ts=None) -> list[dict]:
    ts = [t for t in quad_ext_representatives(2) if t != -3] if ts is None else ts
    order = [t for t in quad_ext_representatives(2) if t in ts]
    return [{"t": t, "name": _name(2, t), "ramified": True} for t in order]


def _merge(cands: list[dict]) -> list[dict]:
    seen, out = set(), []
    for c in cands:
        if c["t"] not in seen:
            seen.add(c["t"])
            out.append(c)
    return out


def classify_local_type(d: NewformLocalDatum, want_field: bool = False) -> LocalTypeReport:
    """Type of pi_p and, in the supercuspidal case, the candidate inducing fields.

    With ``want_field`` the global root numbers are mandatory.
    """
    p, Np, Cp = d.p, d.Np, d.Cp
    if Np == 0:
        return LocalTypeReport("Unramified", reasoning=["N_p = 0: unramified principal series"])
    if Np == 1 and Cp == 0:
        rep = LocalTypeReport("Steinberg", reasoning=["N_p = 1 and C_p = 0: twist of Steinberg"])
        if d.weight is not None and p != 2:
            sign = "-" if p % 4 == 1 else ""
            rep.epsilon_p = f"{sign}a_{p} * {p}^((2-{d.weight})/2)"
            rep.reasoning.append("eps_p from the recomputed special-representation ratio")
        return rep
    if Np == Cp:
        return LocalTypeReport("PrincipalSeries",
                               reasoning=[f"N_p = C_p = {Np}: ramified principal series"])
    rep = LocalTypeReport("Supercuspidal", reasoning=[f"N_p = {Np} > C_p = {Cp}: supercuspidal"])
    if want_field and (d.epsF is None or d.epsFtwist is None):
        raise ValueError("global root numbers are needed to identify K")
    branches = [d.minimal] if d.minimal is not None else [True, False]
    cands = []
    for mnl in branches:
        tag = "" if d.minimal is not None else f"[{'minimal' if mnl else 'non-minimal'}] "
        part = _odd_branch(d, mnl) if p != 2 else _two_branch(d, mnl)
        for c in part[0]:
            c = dict(c)
            if d.minimal is None:
                c["branch"] = "minimal" if mnl else "non-minimal"
            cands.append(c)
        rep.reasoning.extend(tag + r for r in part[1])
        if part[2] is not None:
            rep.epsilon_p = part[2]
    if d.minimal is None:
        rep.reasoning.append("minimality unknown: union of both branches")
    rep.candidates = cands if d.minimal is None else _merge(cands)
    if p == 2 and Np in NON_DIHEDRAL_N2:
        rep.possibly_non_dihedral = True
        rep.reasoning.append(f"N_2 = {Np} in {{3, 4, 6, 7}}: possibly non-dihedral (S_4-type)")
    if not rep.candidates and not rep.possibly_non_dihedral:
        raise InvalidDatum("no dihedral inducing field is compatible with the datum")
    return rep


def _odd_branch(d: NewformLocalDatum, minimal: bool):
    p, Np = d.p, d.Np
    reasons = []
    if minimal:
        if Np % 2 == 0:
            return [_unramified(p)], [f"p-minimal, N_p = {Np} even: K unramified"], None
        reasons.append(f"p-minimal, N_p = {Np} odd: K ramified")
        rams = _ramified_odd(p)
        if d.epsF is None or d.epsFtwist is None:
            reasons.append("global root numbers absent: both ramified fields remain")
            return rams, reasons, None
        eps_p = derived_eps_p(d)
        rel = "I" if eps_p == 1 else "II"
        reasons.append(f"eps(f x chi_p) = {'' if eps_p == 1 else '-'}chi_p(N') eps(f): eps_p = {eps_p}")
        if p % 4 == 3:
            pick = rams[0] if rel == "I" else rams[1]
            reasons.append(f"p = 3 mod 4: K = {pick['name']}")
            return [pick], reasons, str(eps_p)
        reasons.append("p = 1 mod 4: the ramified field cannot be concluded from eps_p")
        return rams, reasons, str(eps_p)
    # not p-minimal: only the ramified non-minimal pairs have N_p even besides K unramified
    if Np % 2:
        return [], [f"non-minimal with N_p = {Np} odd: no dihedral pair"], None
    return ([_unramified(p)] + _ramified_odd(p),
            [f"non-minimal, N_p = {Np} even: unramified or ramified K"], None)


def _two_branch(d: NewformLocalDatum, minimal: bool):
    Np = d.Np
    reasons = []
    if minimal and Np % 2 == 0:
        cands = [_unramified(2)]
        reasons = [f"2-minimal, N_2 = {Np} even: K unramified when l(chi) >= d"]
        if Np in (4, 6):
            # a(chi) = d, so l(chi) = d - 1 and N_2 = 2d from a ramified K
            ram = [t for t in quad_ext_representatives(2) if t != -3 and LocalField(2, t).d == Np // 2]
            cands += _ramified_two(ram)
            reasons.append(f"l(chi) < d: ramified K with d = {Np // 2} also gives N_2 = {Np}")
        return cands, reasons, None
    cands = []
    if not minimal:
        if Np % 2 == 0:
            cands.append(_unramified(2))
        reasons.append("not 2-minimal: unramified and ramified K cannot be separated by N_2")
    else:
        reasons.append(f"2-minimal, N_2 = {Np} odd: K ramified")
    if d.epsF is None or d.epsFtwist is None:
        reasons.append("global root numbers absent: all ramified fields remain")
        return cands + _ramified_two(), reasons, None
    ts = [-1] if not isinstance(d.epsFtwist, dict) else sorted(int(k) for k in d.epsFtwist)
    rels = {}
    for t in ts:
        e = derived_eps_p(d, t)
        rels[t] = "I" if e == 1 else "II"
    distinct = set(rels.values())
    eps_txt = None
    if len(distinct) > 1:
        reasons.append(f"relations differ between the twists {rels}: union of table rows")
        allowed = set()
        for r in distinct:
            allowed |= set(P2_TABLE[(minimal, r)])
    else:
        r = distinct.pop()
        reasons.append(f"relation {r} ({'eps_2 = 1' if r == 'I' else 'eps_2 = -1'})")
        allowed = set(P2_TABLE[(minimal, r)])
        eps_txt = "1" if r == "I" else "-1"
    return cands + _ramified_two(allowed), reasons, eps_txt


# ---------------------------------------------------------------------------
# JSON lines


def classify_lines(lines, want_field: bool = False):
    """Yield (line number, report or error message) for each non-blank line."""
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            datum = NewformLocalDatum.from_json(line)
            yield n, classify_local_type(datum, want_field)
        except (ValueError, json.JSONDecodeError) as e:
            yield n, f"line {n}: {e}"
