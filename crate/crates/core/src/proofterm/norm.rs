//! Beta-eta normalization of terms.

use crate::syntax::Term;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// The beta-eta normal form of `t`: normal-order beta reduction to beta
/// normal form, then eta contraction. Returns `None` if more than `budget`
/// contractions are needed, which only happens on ill-typed input.
pub fn beta_eta_norm(t: &Term, budget: u64) -> Option<Term> {
    let mut fuel = budget;
    let b = beta_norm(t.clone(), &mut fuel)?;
    eta_norm(&b, &mut fuel)
}

pub fn beta_eta_norm_default(t: &Term) -> Option<Term> {
    beta_eta_norm(t, DEFAULT_BUDGET)
}

fn spend(fuel: &mut u64) -> Option<()> {
    *fuel = fuel.checked_sub(1)?;
    Some(())
}

fn beta_norm(mut t: Term, fuel: &mut u64) -> Option<Term> {
    // Contract head redexes in a loop so long reduction sequences do not
    // grow the stack.
    loop {
        match t {
            Term::Abs(ty, body) => return Some(Term::Abs(ty, Box::new(beta_norm(*body, fuel)?))),
            Term::App(..) => {
                let (head, mut args) = unfold(t);
                match head {
                    Term::Abs(_, body) => {
                        spend(fuel)?;
                        let first = args.remove(0);
                        t = Term::apps(body.subst_bv(&first), args);
                    }
                    head => {
                        let args = args
                            .into_iter()
                            .map(|a| beta_norm(a, fuel))
                            .collect::<Option<Vec<_>>>()?;
                        return Some(Term::apps(head, args));
                    }
                }
            }
            atom => return Some(atom),
        }
    }
}

fn unfold(t: Term) -> (Term, Vec<Term>) {
    let mut args = Vec::new();
    let mut cur = t;
    while let Term::App(f, x) = cur {
        args.push(*x);
        cur = *f;
    }
    args.reverse();
    (cur, args)
}

fn eta_norm(t: &Term, fuel: &mut u64) -> Option<Term> {
    match t {
        Term::Abs(ty, body) => {
            let body = eta_norm(body, fuel)?;
            if let Some(f) = eta_contract(&body) {
                spend(fuel)?;
                Some(f)
            } else {
                Some(Term::Abs(ty.clone(), Box::new(body)))
            }
        }
        Term::App(f, x) => Some(Term::app(eta_norm(f, fuel)?, eta_norm(x, fuel)?)),
        atom => Some(atom.clone()),
    }
}

/// For the body `f (Bv 0)` of an abstraction with `Bv 0` not loose in `f`,
/// returns `f` with its loose indices shifted down past the removed binder.
pub fn eta_contract(body: &Term) -> Option<Term> {
    match body {
        Term::App(f, x) if **x == Term::Bv(0) && !f.has_loose_bv(0) => {
            Some(f.subst_bv2(0, &Term::Bv(0)))
        }
        _ => None,
    }
}

pub fn has_beta_redex(t: &Term) -> bool {
    match t {
        Term::App(f, x) => {
            matches!(**f, Term::Abs(..)) || has_beta_redex(f) || has_beta_redex(x)
        }
        Term::Abs(_, b) => has_beta_redex(b),
        _ => false,
    }
}

pub fn has_eta_redex(t: &Term) -> bool {
    match t {
        Term::Abs(_, b) => eta_contract(b).is_some() || has_eta_redex(b),
        Term::App(f, x) => has_eta_redex(f) || has_eta_redex(x),
        _ => false,
    }
}

pub fn is_normal(t: &Term) -> bool {
    !has_beta_redex(t) && !has_eta_redex(t)
}
