//! Signatures, theories, and their wellformedness conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use crate::sorts::{wf_sort, OSig};
use crate::syntax::{match_type, Name, Sort, Term, Typ, TypeSubst, Var};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    /// Most general type of each constant.
    pub const_type: BTreeMap<Name, Typ>,
    pub type_arity: BTreeMap<Name, usize>,
    pub osig: OSig,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub sig: Signature,
    pub axioms: BTreeSet<Term>,
}

/// The generic type variable `'a` with empty sort used in declared types.
pub fn tv_a() -> Typ {
    Typ::tvar("'a", Sort::empty())
}

pub fn tv_b() -> Typ {
    Typ::tvar("'b", Sort::empty())
}

/// Name of the constant encoding membership in class `c`.
pub fn const_of_class(c: &Name) -> Name {
    Name::from(format!("{c}_class").as_str())
}

/// Declared type of every class constant: `'a itself -> prop`.
pub fn class_const_type() -> Typ {
    Typ::fun(Typ::itself(tv_a()), Typ::prop())
}

pub fn imp_const() -> Term {
    Term::ct("imp", Typ::fun(Typ::prop(), Typ::fun(Typ::prop(), Typ::prop())))
}

/// `⋀` at binder type `ty`.
pub fn all_const(ty: &Typ) -> Term {
    Term::ct("all", Typ::fun(Typ::fun(ty.clone(), Typ::prop()), Typ::prop()))
}

/// `≡` at type `ty`.
pub fn eq_const(ty: &Typ) -> Term {
    Term::ct(
        "eq",
        Typ::fun(ty.clone(), Typ::fun(ty.clone(), Typ::prop())),
    )
}

pub fn mk_imp(a: Term, b: Term) -> Term {
    Term::apps(imp_const(), [a, b])
}

pub fn mk_eq(ty: &Typ, a: Term, b: Term) -> Term {
    Term::apps(eq_const(ty), [a, b])
}

/// `⋀` applied to an abstraction over `ty`.
pub fn mk_all(ty: &Typ, body: Term) -> Term {
    Term::app(all_const(ty), Term::abs(ty.clone(), body))
}

/// Splits `imp a b`.
pub fn dest_imp(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::App(f, b) => match &**f {
            Term::App(c, a) => match &**c {
                Term::Ct(n, _) if n.as_str() == "imp" => Some((a, b)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// Splits `eq a b`, also returning the type of the sides.
pub fn dest_eq(t: &Term) -> Option<(&Typ, &Term, &Term)> {
    match t {
        Term::App(f, b) => match &**f {
            Term::App(c, a) => match &**c {
                Term::Ct(n, ty) if n.as_str() == "eq" => Some((ty.dest_fun()?.0, a, b)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// Splits `all f` into the binder type and `f`.
pub fn dest_all(t: &Term) -> Option<(&Typ, &Term)> {
    match t {
        Term::App(c, f) => match &**c {
            Term::Ct(n, ty) if n.as_str() == "all" => Some((ty.dest_fun()?.0.dest_fun()?.0, f)),
            _ => None,
        },
        _ => None,
    }
}

/// The fixed content every theory must declare.
pub fn std_sig() -> Signature {
    let mut sig = Signature::default();
    for (k, n) in [("fun", 2), ("prop", 0), ("itself", 1)] {
        sig.type_arity.insert(Name::from(k), n);
        sig.osig.tcs.insert(Name::from(k), BTreeMap::new());
    }
    let prop = Typ::prop();
    let consts = [
        ("imp", Typ::fun(prop.clone(), Typ::fun(prop.clone(), prop.clone()))),
        (
            "all",
            Typ::fun(Typ::fun(tv_a(), prop.clone()), prop.clone()),
        ),
        ("eq", Typ::fun(tv_a(), Typ::fun(tv_a(), prop.clone()))),
        ("type", Typ::itself(tv_a())),
    ];
    for (c, t) in consts {
        sig.const_type.insert(Name::from(c), t);
    }
    sig
}

pub fn std_theory() -> Theory {
    Theory {
        sig: std_sig(),
        axioms: eq_axs().iter().cloned().collect(),
    }
}

pub fn is_std_sig(sig: &Signature) -> bool {
    let std = std_sig();
    std.type_arity
        .iter()
        .all(|(k, n)| sig.type_arity.get(k) == Some(n))
        && std
            .const_type
            .iter()
            .all(|(c, t)| sig.const_type.get(c) == Some(t))
}

static EQ_AXS: LazyLock<Vec<Term>> = LazyLock::new(build_eq_axs);

/// The seven equality axioms, in the order: reflexivity, symmetry,
/// transitivity, equality elimination for propositions, equality
/// introduction for propositions, application congruence, abstraction
/// congruence.
pub fn eq_axs() -> &'static [Term] {
    &EQ_AXS
}

pub const AX_REFL: usize = 0;
pub const AX_SYM: usize = 1;
pub const AX_TRANS: usize = 2;
pub const AX_EQ_MP: usize = 3;
pub const AX_EQ_INTRO: usize = 4;
pub const AX_COMB: usize = 5;
pub const AX_ABS: usize = 6;

fn build_eq_axs() -> Vec<Term> {
    let a = tv_a();
    let b = tv_b();
    let ab = Typ::fun(a.clone(), b.clone());
    let prop = Typ::prop();
    let x = Term::fv("x", a.clone());
    let y = Term::fv("y", a.clone());
    let z = Term::fv("z", a.clone());
    let pa = Term::fv("A", prop.clone());
    let pb = Term::fv("B", prop.clone());
    let f = Term::fv("f", ab.clone());
    let g = Term::fv("g", ab.clone());
    let eq_a = |l: &Term, r: &Term| mk_eq(&a, l.clone(), r.clone());
    let eq_p = |l: &Term, r: &Term| mk_eq(&prop, l.clone(), r.clone());
    let fb0 = Term::app(f.clone(), Term::Bv(0));
    let gb0 = Term::app(g.clone(), Term::Bv(0));
    vec![
        eq_a(&x, &x),
        mk_imp(eq_a(&x, &y), eq_a(&y, &x)),
        mk_imp(eq_a(&x, &y), mk_imp(eq_a(&y, &z), eq_a(&x, &z))),
        mk_imp(eq_p(&pa, &pb), mk_imp(pa.clone(), pb.clone())),
        mk_imp(
            mk_imp(pa.clone(), pb.clone()),
            mk_imp(mk_imp(pb.clone(), pa.clone()), eq_p(&pa, &pb)),
        ),
        mk_imp(
            mk_eq(&ab, f.clone(), g.clone()),
            mk_imp(
                eq_a(&x, &y),
                mk_eq(&b, Term::app(f.clone(), x.clone()), Term::app(g.clone(), y.clone())),
            ),
        ),
        mk_imp(
            mk_all(&a, mk_eq(&b, fb0.clone(), gb0.clone())),
            mk_eq(&ab, Term::abs(a.clone(), fb0), Term::abs(a.clone(), gb0)),
        ),
    ]
}

impl Signature {
    pub fn wf_type(&self, ty: &Typ) -> bool {
        match ty {
            Typ::Ty(k, args) => {
                self.type_arity.get(k) == Some(&args.len()) && args.iter().all(|a| self.wf_type(a))
            }
            Typ::Tv(_, s) => wf_sort(&self.osig.sub, s),
        }
    }

    pub fn wf_term(&self, t: &Term) -> bool {
        match t {
            Term::Ct(c, ty) => match self.const_type.get(c) {
                Some(generic) => self.wf_type(ty) && match_type(ty, generic).is_some(),
                None => false,
            },
            Term::Fv(_, ty) => self.wf_type(ty),
            Term::Bv(_) => true,
            Term::Abs(ty, b) => self.wf_type(ty) && self.wf_term(b),
            Term::App(f, x) => self.wf_term(f) && self.wf_term(x),
        }
    }

    /// Wellformed and typeable in the empty context.
    pub fn wt_term(&self, t: &Term) -> bool {
        self.wf_term(t) && t.typ().is_some()
    }

    pub fn const_types_wf(&self) -> bool {
        self.const_type.values().all(|t| self.wf_type(t))
    }

    /// Constructors with signatures are exactly those with arities, and every
    /// signature has the declared number of arguments.
    pub fn tcsigs_match_arities(&self) -> bool {
        let tcs_dom: BTreeSet<&Name> = self.osig.tcs.keys().collect();
        let arf_dom: BTreeSet<&Name> = self.type_arity.keys().collect();
        tcs_dom == arf_dom
            && self.osig.tcs.iter().all(|(k, dm)| {
                dm.values()
                    .all(|ss| self.type_arity.get(k) == Some(&ss.len()))
            })
    }

    pub fn is_wf(&self) -> bool {
        self.const_types_wf() && self.osig.is_wf() && self.tcsigs_match_arities()
    }
}

pub fn wf_sig(sig: &Signature) -> bool {
    sig.is_wf()
}

impl Theory {
    pub fn axioms_wf(&self) -> bool {
        self.axioms
            .iter()
            .all(|p| self.sig.wf_term(p) && p.typ().is_some_and(|t| t.is_prop()))
    }

    pub fn has_eq_axs(&self) -> bool {
        eq_axs().iter().all(|ax| self.axioms.contains(ax))
    }

    pub fn is_wf(&self) -> bool {
        self.sig.is_wf() && self.axioms_wf() && is_std_sig(&self.sig) && self.has_eq_axs()
    }

    /// Every non-identity binding of `rho` is a wellformed type of the
    /// required sort.
    pub fn wf_inst(&self, rho: &TypeSubst) -> bool {
        rho.iter().all(|((v, s), t)| {
            is_identity(v, s, t) || (self.sig.osig.has_sort(t, s) && self.sig.wf_type(t))
        })
    }
}

fn is_identity(v: &Var, s: &Sort, t: &Typ) -> bool {
    matches!(t, Typ::Tv(w, r) if w == v && r == s)
}

pub fn wf_theory(thy: &Theory) -> bool {
    thy.is_wf()
}
