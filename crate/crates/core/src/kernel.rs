//! The trusted kernel.
//!
//! A [`Thm`] can only be produced by the inference rules implemented as
//! methods of [`Ctxt`]. Every theorem is tagged with the session of the
//! context that built it, and rules refuse theorems from other sessions.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::signature::{
    all_const, class_const_type, const_of_class, dest_all, dest_imp, eq_const, mk_imp, Theory,
};
use crate::syntax::{Name, Sort, Term, Typ, TypeSubst, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("theory is not wellformed")]
    IllFormedTheory,
    #[error("theorem belongs to a different kernel session")]
    ForeignTheorem,
    #[error("term is not an axiom of the theory")]
    NotAnAxiom,
    #[error("type instantiation is not wellformed")]
    IllFormedInstantiation,
    #[error("term is not wellformed in the signature")]
    IllFormed,
    #[error("term is not a proposition")]
    NotProp,
    #[error("variable occurs free in the hypotheses")]
    VarOccursInHyps,
    #[error("type is not wellformed in the signature")]
    IllFormedType,
    #[error("conclusion is not a universal quantification")]
    NotAForall,
    #[error("argument type does not match the binder type")]
    ArgTypeMismatch,
    #[error("argument is not wellformed in the signature")]
    IllFormedArg,
    #[error("conclusion is not an implication")]
    NotAnImplication,
    #[error("premise does not match the implication's antecedent")]
    PremiseMismatch,
    #[error("declared types do not match the term's type")]
    TypeMismatch,
    #[error("class constant is missing or has the wrong type")]
    ClassConstantMissing,
    #[error("type does not have the required sort")]
    SortCheckFailed,
}

/// `Γ ⊢ t`. Only constructible through [`Ctxt`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm {
    hyps: BTreeSet<Term>,
    concl: Term,
    session: u64,
}

impl Thm {
    pub fn hyps(&self) -> &BTreeSet<Term> {
        &self.hyps
    }

    pub fn concl(&self) -> &Term {
        &self.concl
    }
}

static NEXT_SESSION: AtomicU64 = AtomicU64::new(1);

/// A kernel session over a wellformed theory.
#[derive(Debug)]
pub struct Ctxt {
    theory: Theory,
    session: u64,
}

impl Ctxt {
    pub fn new(theory: Theory) -> Result<Ctxt, KernelError> {
        if !theory.is_wf() {
            return Err(KernelError::IllFormedTheory);
        }
        Ok(Ctxt {
            theory,
            session: NEXT_SESSION.fetch_add(1, Ordering::Relaxed),
        })
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    fn mk(&self, hyps: BTreeSet<Term>, concl: Term) -> Thm {
        Thm {
            hyps,
            concl,
            session: self.session,
        }
    }

    fn own(&self, th: &Thm) -> Result<(), KernelError> {
        if th.session == self.session {
            Ok(())
        } else {
            Err(KernelError::ForeignTheorem)
        }
    }

    /// Wellformed and of type `prop`.
    fn check_prop(&self, t: &Term) -> Result<(), KernelError> {
        if !self.theory.sig.wf_term(t) {
            return Err(KernelError::IllFormed);
        }
        match t.typ() {
            Some(ty) if ty.is_prop() => Ok(()),
            _ => Err(KernelError::NotProp),
        }
    }

    /// Whether `th` satisfies the kernel's output invariant: its conclusion
    /// and all hypotheses are wellformed propositions.
    pub fn is_wellformed_thm(&self, th: &Thm) -> bool {
        th.session == self.session
            && self.check_prop(&th.concl).is_ok()
            && th.hyps.iter().all(|h| self.check_prop(h).is_ok())
    }

    /// `⊢ rho(t)` for an axiom `t`.
    pub fn axiom(&self, t: &Term, rho: &TypeSubst) -> Result<Thm, KernelError> {
        if !self.theory.axioms.contains(t) {
            return Err(KernelError::NotAnAxiom);
        }
        if !self.theory.wf_inst(rho) {
            return Err(KernelError::IllFormedInstantiation);
        }
        Ok(self.mk(BTreeSet::new(), rho.apply_term(t)))
    }

    /// `{t} ⊢ t`
    pub fn assume(&self, t: &Term) -> Result<Thm, KernelError> {
        self.check_prop(t)?;
        Ok(self.mk(BTreeSet::from([t.clone()]), t.clone()))
    }

    /// From `Γ ⊢ t` derive `Γ ⊢ ⋀x::T. t`, provided `(x, T)` is not free in `Γ`.
    pub fn forall_intro(&self, th: &Thm, x: &Var, ty: &Typ) -> Result<Thm, KernelError> {
        self.own(th)?;
        if !self.theory.sig.wf_type(ty) {
            return Err(KernelError::IllFormedType);
        }
        let key = (x.clone(), ty.clone());
        if th.hyps.iter().any(|h| h.frees().contains(&key)) {
            return Err(KernelError::VarOccursInHyps);
        }
        let concl = Term::app(all_const(ty), th.concl.abs_fv(x, ty));
        Ok(self.mk(th.hyps.clone(), concl))
    }

    /// From `Γ ⊢ ⋀x::T. t` derive `Γ ⊢ t[u/x]`.
    pub fn forall_elim(&self, th: &Thm, u: &Term) -> Result<Thm, KernelError> {
        self.own(th)?;
        let (ty, body) = match dest_all(&th.concl) {
            Some((_, Term::Abs(ty, body))) => (ty, body),
            _ => return Err(KernelError::NotAForall),
        };
        if !self.theory.sig.wf_term(u) {
            return Err(KernelError::IllFormedArg);
        }
        if u.typ().as_ref() != Some(ty) {
            return Err(KernelError::ArgTypeMismatch);
        }
        Ok(self.mk(th.hyps.clone(), body.subst_bv(u)))
    }

    /// From `Γ ⊢ u` derive `Γ - {t} ⊢ t ⟹ u`.
    pub fn implies_intro(&self, th: &Thm, t: &Term) -> Result<Thm, KernelError> {
        self.own(th)?;
        self.check_prop(t)?;
        let mut hyps = th.hyps.clone();
        hyps.remove(t);
        Ok(self.mk(hyps, mk_imp(t.clone(), th.concl.clone())))
    }

    /// From `Γ1 ⊢ t ⟹ u` and `Γ2 ⊢ t` derive `Γ1 ∪ Γ2 ⊢ u`.
    pub fn implies_elim(&self, th1: &Thm, th2: &Thm) -> Result<Thm, KernelError> {
        self.own(th1)?;
        self.own(th2)?;
        let (t, u) = dest_imp(&th1.concl).ok_or(KernelError::NotAnImplication)?;
        if *t != th2.concl {
            return Err(KernelError::PremiseMismatch);
        }
        let hyps = th1.hyps.union(&th2.hyps).cloned().collect();
        Ok(self.mk(hyps, u.clone()))
    }

    /// `⊢ (λT. t) u ≡ t[u]`
    pub fn beta(&self, ty: &Typ, t: &Term, u: &Term) -> Result<Thm, KernelError> {
        let lam = Term::abs(ty.clone(), t.clone());
        let sig = &self.theory.sig;
        if !sig.wf_term(&lam) {
            return Err(KernelError::IllFormed);
        }
        let lam_ty = lam.typ().ok_or(KernelError::IllFormed)?;
        if !sig.wf_term(u) {
            return Err(KernelError::IllFormedArg);
        }
        if u.typ().as_ref() != Some(ty) {
            return Err(KernelError::ArgTypeMismatch);
        }
        let (_, res_ty) = lam_ty.dest_fun().expect("abstractions have function type");
        let concl = Term::apps(eq_const(res_ty), [Term::app(lam, u.clone()), t.subst_bv(u)]);
        Ok(self.mk(BTreeSet::new(), concl))
    }

    /// `⊢ (λT. t (Bv 0)) ≡ t` for closed `t :: T -> T'`.
    pub fn eta(&self, t: &Term, ty: &Typ, res_ty: &Typ) -> Result<Thm, KernelError> {
        if !self.theory.sig.wf_term(t) {
            return Err(KernelError::IllFormed);
        }
        let fun_ty = Typ::fun(ty.clone(), res_ty.clone());
        match t.typ() {
            None => return Err(KernelError::IllFormed),
            Some(actual) if actual != fun_ty => return Err(KernelError::TypeMismatch),
            Some(_) => {}
        }
        let expanded = Term::abs(ty.clone(), Term::app(t.clone(), Term::Bv(0)));
        let concl = Term::apps(eq_const(&fun_ty), [expanded, t.clone()]);
        Ok(self.mk(BTreeSet::new(), concl))
    }

    /// `⊢ c_class TYPE(T itself)` when `T` has sort `{c}`.
    pub fn of_class(&self, ty: &Typ, c: &Name) -> Result<Thm, KernelError> {
        let sig = &self.theory.sig;
        let cc = const_of_class(c);
        if sig.const_type.get(&cc) != Some(&class_const_type()) {
            return Err(KernelError::ClassConstantMissing);
        }
        if !sig.wf_type(ty) {
            return Err(KernelError::IllFormedType);
        }
        if !sig.osig.has_sort(ty, &Sort::new([c.clone()])) {
            return Err(KernelError::SortCheckFailed);
        }
        let it = Typ::itself(ty.clone());
        let concl = Term::app(
            Term::Ct(cc, Typ::fun(it.clone(), Typ::prop())),
            Term::ct("type", it),
        );
        Ok(self.mk(BTreeSet::new(), concl))
    }
}
