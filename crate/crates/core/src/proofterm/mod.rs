//! Proof terms and the checker that replays them through the kernel.

pub mod norm;
mod replay;

pub use replay::{check_proof, Checker, ReplayError, ReplayErrorKind};

use crate::syntax::{Name, Sort, Term, Typ, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProofTerm {
    /// An axiom together with a type instantiation given as an association
    /// list.
    PAxm(Term, Vec<((Var, Sort), Typ)>),
    /// An assumption introduced by an enclosing `AbsP`, as a De Bruijn index.
    PBound(usize),
    /// Universal introduction over a term variable of the given type.
    Abst(Typ, Box<ProofTerm>),
    /// Implication introduction discharging the given assumption.
    AbsP(Term, Box<ProofTerm>),
    /// Universal elimination.
    Appt(Box<ProofTerm>, Term),
    /// Implication elimination.
    AppP(Box<ProofTerm>, Box<ProofTerm>),
    /// Class membership of a type.
    OfClass(Typ, Name),
    /// A free assumption.
    Hyp(Term),
}

impl ProofTerm {
    pub fn abst(ty: Typ, p: ProofTerm) -> ProofTerm {
        ProofTerm::Abst(ty, Box::new(p))
    }

    pub fn absp(t: Term, p: ProofTerm) -> ProofTerm {
        ProofTerm::AbsP(t, Box::new(p))
    }

    pub fn appt(p: ProofTerm, t: Term) -> ProofTerm {
        ProofTerm::Appt(Box::new(p), t)
    }

    pub fn appp(p: ProofTerm, q: ProofTerm) -> ProofTerm {
        ProofTerm::AppP(Box::new(p), Box::new(q))
    }

    /// Name of the outermost constructor, as used in diagnostics.
    pub fn constructor(&self) -> &'static str {
        match self {
            ProofTerm::PAxm(..) => "PAxm",
            ProofTerm::PBound(_) => "PBound",
            ProofTerm::Abst(..) => "Abst",
            ProofTerm::AbsP(..) => "AbsP",
            ProofTerm::Appt(..) => "Appt",
            ProofTerm::AppP(..) => "AppP",
            ProofTerm::OfClass(..) => "OfClass",
            ProofTerm::Hyp(_) => "Hyp",
        }
    }

    /// Free assumptions of the proof, left to right, with duplicates.
    pub fn hyps(&self) -> Vec<Term> {
        let mut acc = Vec::new();
        self.collect_hyps(&mut acc);
        acc
    }

    fn collect_hyps(&self, acc: &mut Vec<Term>) {
        match self {
            ProofTerm::Hyp(t) => acc.push(t.clone()),
            ProofTerm::Abst(_, p) | ProofTerm::AbsP(_, p) | ProofTerm::Appt(p, _) => {
                p.collect_hyps(acc)
            }
            ProofTerm::AppP(p, q) => {
                p.collect_hyps(acc);
                q.collect_hyps(acc);
            }
            ProofTerm::PAxm(..) | ProofTerm::PBound(_) | ProofTerm::OfClass(..) => {}
        }
    }

    /// Calls `f` on every term embedded in the proof.
    pub fn for_each_term<F: FnMut(&Term)>(&self, f: &mut F) {
        match self {
            ProofTerm::PAxm(t, _) | ProofTerm::Hyp(t) => f(t),
            ProofTerm::AbsP(t, p) | ProofTerm::Appt(p, t) => {
                f(t);
                p.for_each_term(f);
            }
            ProofTerm::Abst(_, p) => p.for_each_term(f),
            ProofTerm::AppP(p, q) => {
                p.for_each_term(f);
                q.for_each_term(f);
            }
            ProofTerm::PBound(_) | ProofTerm::OfClass(..) => {}
        }
    }
}
