//! Derived rules built only from kernel inference rules and the equality
//! axioms: symmetry, transitivity, congruences, and a conversion that proves
//! a term equal to its beta-eta normal form.
//!
//! Nothing here is trusted. Every theorem comes out of [`Ctxt`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kernel::{Ctxt, KernelError, Thm};
use crate::proofterm::norm::eta_contract;
use crate::signature::{
    all_const, dest_all, dest_eq, eq_axs, tv_a, tv_b, AX_ABS, AX_COMB, AX_EQ_MP, AX_REFL, AX_SYM,
    AX_TRANS,
};
use crate::syntax::{Name, Sort, Term, Typ, TypeSubst, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DerivedError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("term has no type")]
    Untyped,
    #[error("expected an equation")]
    NotAnEquation,
    #[error("equations do not chain")]
    NoChain,
    #[error("normalization budget exhausted")]
    Budget,
}

/// Reserved variable name for fresh variables. Only `Indexed` variables with
/// this name are ever generated.
pub const FRESH_NAME: &str = "%fresh";

/// Counter-based fresh variables in a reserved namespace.
#[derive(Clone, Debug)]
pub struct FreshVars {
    name: Name,
    next: u64,
}

impl FreshVars {
    /// A generator whose variables differ from every reserved variable
    /// occurring in `terms`.
    pub fn avoiding<'a, I: IntoIterator<Item = &'a Term>>(terms: I) -> FreshVars {
        let mut fresh = FreshVars {
            name: Name::from(FRESH_NAME),
            next: 0,
        };
        for t in terms {
            fresh.avoid(t);
        }
        fresh
    }

    pub fn avoid(&mut self, t: &Term) {
        for (v, _) in t.frees() {
            if let Var::Indexed(n, i) = v {
                if n == self.name && i >= self.next {
                    self.next = i + 1;
                }
            }
        }
    }

    pub fn next_var(&mut self) -> Var {
        let v = Var::Indexed(self.name.clone(), self.next);
        self.next += 1;
        v
    }
}

fn typ_of(t: &Term) -> Result<Typ, DerivedError> {
    t.typ().ok_or(DerivedError::Untyped)
}

fn dest_eq_thm(th: &Thm) -> Result<(Typ, Term, Term), DerivedError> {
    let (ty, l, r) = dest_eq(th.concl()).ok_or(DerivedError::NotAnEquation)?;
    Ok((ty.clone(), l.clone(), r.clone()))
}

/// Derived rules over one kernel session.
pub struct Rules<'k> {
    ctxt: &'k Ctxt,
    pub fresh: FreshVars,
    budget: u64,
}

impl<'k> Rules<'k> {
    pub fn new(ctxt: &'k Ctxt, fresh: FreshVars, budget: u64) -> Rules<'k> {
        Rules {
            ctxt,
            fresh,
            budget,
        }
    }

    pub fn ctxt(&self) -> &'k Ctxt {
        self.ctxt
    }

    /// Instance of an equality axiom with `'a := ta`, `'b := tb` and the
    /// given term variables instantiated.
    fn inst_axiom(
        &self,
        idx: usize,
        ta: &Typ,
        tb: &Typ,
        vars: &[(&str, Typ, &Term)],
    ) -> Result<Thm, DerivedError> {
        let k = self.ctxt;
        let rho: TypeSubst = [
            ((Var::named("'a"), Sort::empty()), ta.clone()),
            ((Var::named("'b"), Sort::empty()), tb.clone()),
        ]
        .into_iter()
        .collect();
        let mut th = k.axiom(&eq_axs()[idx], &rho)?;
        for (v, ty, _) in vars {
            th = k.forall_intro(&th, &Var::named(v), &rho.apply_typ(ty))?;
        }
        for (_, _, u) in vars.iter().rev() {
            th = k.forall_elim(&th, u)?;
        }
        Ok(th)
    }

    /// `⊢ t ≡ t`
    pub fn refl(&self, t: &Term) -> Result<Thm, DerivedError> {
        let ty = typ_of(t)?;
        self.inst_axiom(AX_REFL, &ty, &tv_b(), &[("x", tv_a(), t)])
    }

    /// From `⊢ a ≡ b` derive `⊢ b ≡ a`.
    pub fn sym(&self, th: &Thm) -> Result<Thm, DerivedError> {
        let (ty, l, r) = dest_eq_thm(th)?;
        let ax = self.inst_axiom(AX_SYM, &ty, &tv_b(), &[("x", tv_a(), &l), ("y", tv_a(), &r)])?;
        Ok(self.ctxt.implies_elim(&ax, th)?)
    }

    /// From `⊢ a ≡ b` and `⊢ b ≡ c` derive `⊢ a ≡ c`.
    pub fn trans(&self, th1: &Thm, th2: &Thm) -> Result<Thm, DerivedError> {
        let (ty, a, b) = dest_eq_thm(th1)?;
        let (_, b2, c) = dest_eq_thm(th2)?;
        if b != b2 {
            return Err(DerivedError::NoChain);
        }
        let ax = self.inst_axiom(
            AX_TRANS,
            &ty,
            &tv_b(),
            &[("x", tv_a(), &a), ("y", tv_a(), &b), ("z", tv_a(), &c)],
        )?;
        let th = self.ctxt.implies_elim(&ax, th1)?;
        Ok(self.ctxt.implies_elim(&th, th2)?)
    }

    /// From `⊢ A ≡ B` and `⊢ A` derive `⊢ B`.
    pub fn eq_mp(&self, eq: &Thm, th: &Thm) -> Result<Thm, DerivedError> {
        let (_, a, b) = dest_eq_thm(eq)?;
        let prop = Typ::prop();
        let ax = self.inst_axiom(
            AX_EQ_MP,
            &tv_a(),
            &tv_b(),
            &[("A", prop.clone(), &a), ("B", prop, &b)],
        )?;
        let imp = self.ctxt.implies_elim(&ax, eq)?;
        Ok(self.ctxt.implies_elim(&imp, th)?)
    }

    /// From `⊢ f ≡ g` and `⊢ x ≡ y` derive `⊢ f x ≡ g y`.
    pub fn comb(&self, fg: &Thm, xy: &Thm) -> Result<Thm, DerivedError> {
        let (fty, f, g) = dest_eq_thm(fg)?;
        let (_, x, y) = dest_eq_thm(xy)?;
        let (dom, cod) = fty.dest_fun().ok_or(DerivedError::Untyped)?;
        let ab = Typ::fun(tv_a(), tv_b());
        let ax = self.inst_axiom(
            AX_COMB,
            dom,
            cod,
            &[
                ("f", ab.clone(), &f),
                ("g", ab, &g),
                ("x", tv_a(), &x),
                ("y", tv_a(), &y),
            ],
        )?;
        let th = self.ctxt.implies_elim(&ax, fg)?;
        Ok(self.ctxt.implies_elim(&th, xy)?)
    }

    /// Abstraction congruence: from `Γ ⊢ s ≡ t` with `(x, ty)` not free in
    /// `Γ` derive `Γ ⊢ (λx::ty. s) ≡ (λx::ty. t)`.
    pub fn abs_cong(&self, x: &Var, ty: &Typ, th: &Thm) -> Result<Thm, DerivedError> {
        let k = self.ctxt;
        let (res_ty, s, t) = dest_eq_thm(th)?;
        let xt = Term::Fv(x.clone(), ty.clone());
        let ls = s.abs_fv(x, ty);
        let lt = t.abs_fv(x, ty);
        // ⊢ (λ.s') x ≡ (λ.t') x
        let bs = self.beta_redex(&ls, &xt)?;
        let bt = self.beta_redex(&lt, &xt)?;
        let applied = self.trans(&self.trans(&bs, th)?, &self.sym(&bt)?)?;
        // ⊢ ⋀x. (λ.s') x ≡ (λ.t') x, the premise of the abstraction axiom
        let premise = k.forall_intro(&applied, x, ty)?;
        let ab = Typ::fun(tv_a(), tv_b());
        let ax = self.inst_axiom(AX_ABS, ty, &res_ty, &[("f", ab.clone(), &ls), ("g", ab, &lt)])?;
        let mid = k.implies_elim(&ax, &premise)?;
        let eta_s = k.eta(&ls, ty, &res_ty)?;
        let eta_t = k.eta(&lt, ty, &res_ty)?;
        self.trans(&self.trans(&self.sym(&eta_s)?, &mid)?, &eta_t)
    }

    /// `⊢ (λT. b) u ≡ b[u]` for `lam = λT. b`.
    fn beta_redex(&self, lam: &Term, u: &Term) -> Result<Thm, DerivedError> {
        match lam {
            Term::Abs(ty, b) => Ok(self.ctxt.beta(ty, b, u)?),
            _ => Err(DerivedError::Untyped),
        }
    }

    /// From `Γ ⊢ ⋀ f` derive `Γ ⊢ ⋀ (λx. f x)` so that the conclusion has the
    /// shape the elimination rule needs. Returns `th` unchanged when it
    /// already has that shape.
    pub fn expand_forall(&self, th: &Thm) -> Result<Thm, DerivedError> {
        let (ty, f) = dest_all(th.concl()).ok_or(KernelError::NotAForall)?;
        if matches!(f, Term::Abs(..)) {
            return Ok(th.clone());
        }
        let (ty, f) = (ty.clone(), f.clone());
        let eta = self.ctxt.eta(&f, &ty, &Typ::prop())?;
        let all = self.refl(&all_const(&ty))?;
        let eq = self.comb(&all, &self.sym(&eta)?)?;
        // eq : ⊢ ⋀ f ≡ ⋀ (λx. f x)
        self.eq_mp(&eq, th)
    }

    /// `⊢ t ≡ u` where `u` is the beta-eta normal form of the closed term `t`.
    pub fn norm_conv(&mut self, t: &Term) -> Result<Thm, DerivedError> {
        let mut fuel = self.budget;
        let mut cache = BTreeMap::new();
        self.conv(t, &mut fuel, &mut cache)
    }

    fn conv(
        &mut self,
        t: &Term,
        fuel: &mut u64,
        cache: &mut BTreeMap<Term, Thm>,
    ) -> Result<Thm, DerivedError> {
        if let Some(th) = cache.get(t) {
            return Ok(th.clone());
        }
        let th = match t {
            Term::Abs(ty, body) => {
                let x = self.fresh.next_var();
                let opened = body.subst_bv(&Term::Fv(x.clone(), ty.clone()));
                let inner = self.conv(&opened, fuel, cache)?;
                let (_, _, rhs) = dest_eq_thm(&inner)?;
                let th = if rhs == opened {
                    self.refl(t)?
                } else {
                    self.abs_cong(&x, ty, &inner)?
                };
                let (_, _, lam) = dest_eq_thm(&th)?;
                match &lam {
                    Term::Abs(ty, b) => match eta_contract(b) {
                        Some(f) => {
                            *fuel = fuel.checked_sub(1).ok_or(DerivedError::Budget)?;
                            let res = typ_of(&f)?
                                .dest_fun()
                                .map(|(_, r)| r.clone())
                                .ok_or(DerivedError::Untyped)?;
                            let eta = self.ctxt.eta(&f, ty, &res)?;
                            self.trans(&th, &eta)?
                        }
                        None => th,
                    },
                    _ => th,
                }
            }
            Term::App(..) => {
                let (head, args) = t.strip_comb();
                match head {
                    Term::Abs(ty, b) => {
                        *fuel = fuel.checked_sub(1).ok_or(DerivedError::Budget)?;
                        let mut th = self.ctxt.beta(ty, b, args[0])?;
                        for a in &args[1..] {
                            th = self.comb(&th, &self.refl(a)?)?;
                        }
                        let (_, _, reduct) = dest_eq_thm(&th)?;
                        let rest = self.conv(&reduct, fuel, cache)?;
                        self.trans(&th, &rest)?
                    }
                    _ => {
                        let mut th = self.refl(head)?;
                        let mut changed = false;
                        for a in &args {
                            let ath = self.conv(a, fuel, cache)?;
                            let (_, l, r) = dest_eq_thm(&ath)?;
                            changed |= l != r;
                            th = self.comb(&th, &ath)?;
                        }
                        if changed {
                            th
                        } else {
                            self.refl(t)?
                        }
                    }
                }
            }
            _ => self.refl(t)?,
        };
        cache.insert(t.clone(), th.clone());
        Ok(th)
    }

    /// From `Γ ⊢ t` derive `Γ ⊢ u` with `u` the beta-eta normal form of `t`.
    pub fn normalize_thm(&mut self, th: &Thm) -> Result<Thm, DerivedError> {
        let eq = self.norm_conv(th.concl())?;
        let (_, l, r) = dest_eq_thm(&eq)?;
        if l == r {
            return Ok(th.clone());
        }
        self.eq_mp(&eq, th)
    }
}
