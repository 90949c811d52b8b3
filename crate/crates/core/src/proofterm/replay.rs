use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::norm::{beta_eta_norm, DEFAULT_BUDGET};
use super::ProofTerm;
use crate::derived::{DerivedError, FreshVars, Rules};
use crate::kernel::{Ctxt, KernelError, Thm};
use crate::signature::Theory;
use crate::syntax::{Term, Typ, TypeSubst, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayErrorKind {
    #[error("theory is not wellformed")]
    IllFormedTheory,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("normalization failed: {0}")]
    Derived(DerivedError),
    #[error("normalization budget exhausted")]
    Budget,
    #[error("proof index {0} is not bound by an enclosing AbsP")]
    UnboundProofIndex(usize),
    #[error("type instantiation binds the same variable twice")]
    DuplicateInstantiation,
    #[error("proved proposition differs from the claimed one")]
    ConclusionMismatch,
}

impl From<DerivedError> for ReplayErrorKind {
    fn from(e: DerivedError) -> Self {
        match e {
            DerivedError::Kernel(k) => ReplayErrorKind::Kernel(k),
            DerivedError::Budget => ReplayErrorKind::Budget,
            other => ReplayErrorKind::Derived(other),
        }
    }
}

impl ReplayErrorKind {
    /// Stable error code for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            ReplayErrorKind::IllFormedTheory => "ill-formed-theory",
            ReplayErrorKind::Kernel(k) => match k {
                KernelError::IllFormedTheory => "ill-formed-theory",
                KernelError::ForeignTheorem => "foreign-theorem",
                KernelError::NotAnAxiom => "not-an-axiom",
                KernelError::IllFormedInstantiation => "ill-formed-instantiation",
                KernelError::IllFormed => "ill-formed",
                KernelError::NotProp => "not-prop",
                KernelError::VarOccursInHyps => "var-occurs-in-hyps",
                KernelError::IllFormedType => "ill-formed-type",
                KernelError::NotAForall => "not-a-forall",
                KernelError::ArgTypeMismatch => "arg-type-mismatch",
                KernelError::IllFormedArg => "ill-formed-arg",
                KernelError::NotAnImplication => "not-an-implication",
                KernelError::PremiseMismatch => "premise-mismatch",
                KernelError::TypeMismatch => "type-mismatch",
                KernelError::ClassConstantMissing => "class-constant-missing",
                KernelError::SortCheckFailed => "sort-check-failed",
            },
            ReplayErrorKind::Derived(_) => "normalization-failed",
            ReplayErrorKind::Budget => "budget-exhausted",
            ReplayErrorKind::UnboundProofIndex(_) => "unbound-proof-index",
            ReplayErrorKind::DuplicateInstantiation => "duplicate-instantiation",
            ReplayErrorKind::ConclusionMismatch => "conclusion-mismatch",
        }
    }
}

/// A replay failure with the constructor path from the root of the proof to
/// the failing node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    pub path: Vec<&'static str>,
    pub kind: ReplayErrorKind,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.kind, self.path.join("/"))
    }
}

impl std::error::Error for ReplayError {}

impl ReplayError {
    fn at(path: &'static str, kind: ReplayErrorKind) -> ReplayError {
        ReplayError {
            path: vec![path],
            kind,
        }
    }
}

/// Proof checker over one wellformed theory. Shareable across threads; each
/// replay keeps its own state.
#[derive(Debug)]
pub struct Checker {
    ctxt: Ctxt,
    /// Normal form of each axiom, mapped to the axiom as stated.
    axiom_index: BTreeMap<Term, Term>,
    budget: u64,
}

impl Checker {
    pub fn new(theory: Theory) -> Result<Checker, KernelError> {
        Checker::with_budget(theory, DEFAULT_BUDGET)
    }

    pub fn with_budget(theory: Theory, budget: u64) -> Result<Checker, KernelError> {
        let ctxt = Ctxt::new(theory)?;
        let mut axiom_index = BTreeMap::new();
        for ax in &ctxt.theory().axioms {
            if let Some(n) = beta_eta_norm(ax, budget) {
                axiom_index.entry(n).or_insert_with(|| ax.clone());
            }
        }
        Ok(Checker {
            ctxt,
            axiom_index,
            budget,
        })
    }

    pub fn ctxt(&self) -> &Ctxt {
        &self.ctxt
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Replays `proof` to a kernel theorem with a beta-eta normal conclusion.
    pub fn replay_thm(&self, proof: &ProofTerm) -> Result<Thm, ReplayError> {
        let mut fresh = FreshVars::avoiding(&self.ctxt.theory().axioms);
        proof.for_each_term(&mut |t| fresh.avoid(t));
        let mut state = ReplayState {
            checker: self,
            rules: Rules::new(&self.ctxt, fresh, self.budget),
            hyp_stack: Vec::new(),
            tvar_stack: Vec::new(),
        };
        state.replay(proof).map_err(|mut e| {
            e.path.reverse();
            e
        })
    }

    /// The proposition proved by `proof`, if it replays.
    pub fn replay(&self, proof: &ProofTerm) -> Option<Term> {
        self.replay_thm(proof).ok().map(|th| th.concl().clone())
    }

    /// Replays `proof` and compares its conclusion with `claim` after
    /// normalizing the claim.
    pub fn check(&self, proof: &ProofTerm, claim: &Term) -> Result<Thm, ReplayError> {
        let th = self.replay_thm(proof)?;
        let claim = beta_eta_norm(claim, self.budget)
            .ok_or_else(|| ReplayError::at("check", ReplayErrorKind::Budget))?;
        if *th.concl() == claim {
            Ok(th)
        } else {
            Err(ReplayError::at("check", ReplayErrorKind::ConclusionMismatch))
        }
    }
}

/// Whether the theory is wellformed and `proof` proves `claim` in it.
pub fn check_proof(theory: &Theory, proof: &ProofTerm, claim: &Term) -> bool {
    match Checker::new(theory.clone()) {
        Ok(checker) => checker.check(proof, claim).is_ok(),
        Err(_) => false,
    }
}

struct ReplayState<'c> {
    checker: &'c Checker,
    rules: Rules<'c>,
    /// Assumptions of enclosing `AbsP` nodes, innermost last.
    hyp_stack: Vec<Term>,
    /// Fresh variables standing for enclosing `Abst` binders, innermost last.
    tvar_stack: Vec<(Var, Typ)>,
}

type Step = Result<Thm, ReplayErrorKind>;

impl ReplayState<'_> {
    fn ctxt(&self) -> &Ctxt {
        &self.checker.ctxt
    }

    fn replay(&mut self, p: &ProofTerm) -> Result<Thm, ReplayError> {
        self.step(p).map_err(|e| match e {
            Nested::Here(kind) => ReplayError::at(p.constructor(), kind),
            Nested::Below(mut err) => {
                err.path.push(p.constructor());
                err
            }
        })
    }

    fn sub(&mut self, p: &ProofTerm) -> Result<Thm, Nested> {
        self.replay(p).map_err(Nested::Below)
    }

    fn step(&mut self, p: &ProofTerm) -> Result<Thm, Nested> {
        match p {
            ProofTerm::PAxm(t, inst) => Ok(self.axiom(t, inst)?),
            ProofTerm::PBound(n) => {
                let len = self.hyp_stack.len();
                if *n >= len {
                    return Err(ReplayErrorKind::UnboundProofIndex(*n).into());
                }
                let h = self.hyp_stack[len - 1 - n].clone();
                Ok(self.ctxt().assume(&h).map_err(ReplayErrorKind::from)?)
            }
            ProofTerm::Hyp(t) => {
                let t = self.open(t);
                let th = self.ctxt().assume(&t).map_err(ReplayErrorKind::from)?;
                Ok(self.normalize(&th)?)
            }
            ProofTerm::Abst(ty, body) => {
                let x = self.rules.fresh.next_var();
                self.tvar_stack.push((x.clone(), ty.clone()));
                let inner = self.sub(body);
                self.tvar_stack.pop();
                let th = self
                    .ctxt()
                    .forall_intro(&inner?, &x, ty)
                    .map_err(ReplayErrorKind::from)?;
                Ok(self.normalize(&th)?)
            }
            ProofTerm::AbsP(t, body) => {
                let t = self.norm_term(&self.open(t))?;
                self.hyp_stack.push(t.clone());
                let inner = self.sub(body);
                self.hyp_stack.pop();
                Ok(self
                    .ctxt()
                    .implies_intro(&inner?, &t)
                    .map_err(ReplayErrorKind::from)?)
            }
            ProofTerm::Appt(body, t) => {
                let th = self.sub(body)?;
                let u = self.norm_term(&self.open(t))?;
                let th = self.rules.expand_forall(&th).map_err(ReplayErrorKind::from)?;
                let th = self
                    .ctxt()
                    .forall_elim(&th, &u)
                    .map_err(ReplayErrorKind::from)?;
                Ok(self.normalize(&th)?)
            }
            ProofTerm::AppP(p1, p2) => {
                let th1 = self.sub(p1)?;
                let th2 = self.sub(p2)?;
                Ok(self
                    .ctxt()
                    .implies_elim(&th1, &th2)
                    .map_err(ReplayErrorKind::from)?)
            }
            ProofTerm::OfClass(ty, c) => Ok(self
                .ctxt()
                .of_class(ty, c)
                .map_err(ReplayErrorKind::from)?),
        }
    }

    fn axiom(&mut self, t: &Term, inst: &[((crate::syntax::Var, crate::syntax::Sort), Typ)]) -> Step {
        let mut rho = TypeSubst::new();
        let mut seen = BTreeSet::new();
        for ((v, s), ty) in inst {
            if !seen.insert((v, s)) {
                return Err(ReplayErrorKind::DuplicateInstantiation);
            }
            rho.insert(v.clone(), s.clone(), ty.clone());
        }
        let key = self.norm_term(t)?;
        let ax = self
            .checker
            .axiom_index
            .get(&key)
            .ok_or(KernelError::NotAnAxiom)?
            .clone();
        let th = self.ctxt().axiom(&ax, &rho)?;
        self.normalize(&th)
    }

    fn norm_term(&self, t: &Term) -> Result<Term, ReplayErrorKind> {
        beta_eta_norm(t, self.checker.budget).ok_or(ReplayErrorKind::Budget)
    }

    fn normalize(&mut self, th: &Thm) -> Step {
        Ok(self.rules.normalize_thm(th)?)
    }

    /// Replaces loose indices that refer to enclosing `Abst` binders by the
    /// corresponding fresh variables.
    fn open(&self, t: &Term) -> Term {
        if self.tvar_stack.is_empty() {
            return t.clone();
        }
        open_at(t, 0, &self.tvar_stack)
    }
}

fn open_at(t: &Term, depth: usize, stack: &[(Var, Typ)]) -> Term {
    match t {
        Term::Bv(i) if *i >= depth => {
            let j = i - depth;
            let len = stack.len();
            if j < len {
                let (v, ty) = &stack[len - 1 - j];
                Term::Fv(v.clone(), ty.clone())
            } else {
                Term::Bv(i - len)
            }
        }
        Term::Abs(ty, b) => Term::Abs(ty.clone(), Box::new(open_at(b, depth + 1, stack))),
        Term::App(f, x) => Term::App(
            Box::new(open_at(f, depth, stack)),
            Box::new(open_at(x, depth, stack)),
        ),
        other => other.clone(),
    }
}

enum Nested {
    Here(ReplayErrorKind),
    Below(ReplayError),
}

impl From<ReplayErrorKind> for Nested {
    fn from(k: ReplayErrorKind) -> Self {
        Nested::Here(k)
    }
}

impl From<KernelError> for Nested {
    fn from(k: KernelError) -> Self {
        Nested::Here(k.into())
    }
}
