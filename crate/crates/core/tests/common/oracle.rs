//! Brute-force oracles written independently of the library algorithms.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use mlcheck::sorts::OSig;
use mlcheck::syntax::{Name, Sort, Term, Typ, Var};

// ---- type instances by enumeration ----

fn leaf_depths(t: &Typ, depth: usize, acc: &mut BTreeMap<(Var, Sort), usize>) {
    match t {
        Typ::Tv(v, s) => {
            let e = acc.entry((v.clone(), s.clone())).or_insert(depth);
            *e = (*e).max(depth);
        }
        Typ::Ty(_, args) => args.iter().for_each(|a| leaf_depths(a, depth + 1, acc)),
    }
}

fn apply(t: &Typ, rho: &BTreeMap<(Var, Sort), Typ>) -> Typ {
    match t {
        Typ::Tv(v, s) => rho
            .get(&(v.clone(), s.clone()))
            .cloned()
            .unwrap_or_else(|| t.clone()),
        Typ::Ty(k, args) => Typ::Ty(k.clone(), args.iter().map(|a| apply(a, rho)).collect()),
    }
}

/// Every `rho(pattern)` that lies in `universe`, found by trying all
/// assignments of universe types to the pattern's variables. A variable
/// occurring at depth `d` only needs images of depth `<= max_depth - d + 1`.
pub fn instances_in(pattern: &Typ, universe: &[Typ], max_depth: usize) -> BTreeSet<Typ> {
    let mut depths = BTreeMap::new();
    leaf_depths(pattern, 1, &mut depths);
    let vars: Vec<((Var, Sort), usize)> = depths.into_iter().collect();
    let members: BTreeSet<&Typ> = universe.iter().collect();
    let mut out = BTreeSet::new();
    let mut rho = BTreeMap::new();
    fn go(
        i: usize,
        vars: &[((Var, Sort), usize)],
        universe: &[Typ],
        max_depth: usize,
        pattern: &Typ,
        members: &BTreeSet<&Typ>,
        rho: &mut BTreeMap<(Var, Sort), Typ>,
        out: &mut BTreeSet<Typ>,
    ) {
        if i == vars.len() {
            let t = apply(pattern, rho);
            if members.contains(&t) {
                out.insert(t);
            }
            return;
        }
        let (key, d) = &vars[i];
        for cand in universe.iter().filter(|c| c.depth() + d - 1 <= max_depth) {
            rho.insert(key.clone(), cand.clone());
            go(i + 1, vars, universe, max_depth, pattern, members, rho, out);
        }
        rho.remove(key);
    }
    go(0, &vars, universe, max_depth, pattern, &members, &mut rho, &mut out);
    out
}

// ---- sort derivations by saturation ----

fn subterms(t: &Typ, acc: &mut BTreeSet<Typ>) {
    acc.insert(t.clone());
    if let Typ::Ty(_, args) = t {
        args.iter().for_each(|a| subterms(a, acc));
    }
}

/// All judgments `T : c` derivable for subterms of `types`, by closing under
/// three rules: a variable has each class of its sort; `κ :: (Ss) c` gives
/// `κ(Ts) : c` when every argument has every class of its sort; and
/// `T : c`, `c ≤ d` give `T : d`.
pub fn derivable(osig: &OSig, types: &[Typ]) -> BTreeSet<(Typ, Name)> {
    let mut universe = BTreeSet::new();
    types.iter().for_each(|t| subterms(t, &mut universe));
    let le: Vec<(Name, Name)> = osig.sub.pairs().iter().cloned().collect();
    let mut facts: BTreeSet<(Typ, Name)> = BTreeSet::new();
    for t in &universe {
        if let Typ::Tv(_, s) = t {
            for c in s.iter() {
                facts.insert((t.clone(), c.clone()));
            }
        }
    }
    loop {
        let mut new = Vec::new();
        for t in &universe {
            if let Typ::Ty(k, args) = t {
                for (kk, ss, c) in mlcheck::sorts::tcs_triples(&osig.tcs) {
                    if &kk != k || ss.len() != args.len() {
                        continue;
                    }
                    let ok = args
                        .iter()
                        .zip(&ss)
                        .all(|(a, s)| s.iter().all(|d| facts.contains(&(a.clone(), d.clone()))));
                    if ok {
                        new.push((t.clone(), c));
                    }
                }
            }
        }
        for (t, c) in &facts {
            for (c1, c2) in &le {
                if c1 == c {
                    new.push((t.clone(), c2.clone()));
                }
            }
        }
        let before = facts.len();
        facts.extend(new);
        if facts.len() == before {
            return facts;
        }
    }
}

pub fn has_sort_oracle(facts: &BTreeSet<(Typ, Name)>, t: &Typ, s: &Sort) -> bool {
    s.iter().all(|c| facts.contains(&(t.clone(), c.clone())))
}

// ---- reduction in random order ----

fn shift(t: &Term, by: isize, cutoff: usize) -> Term {
    match t {
        Term::Bv(i) if *i >= cutoff => Term::Bv((*i as isize + by) as usize),
        Term::Abs(ty, b) => Term::abs(ty.clone(), shift(b, by, cutoff + 1)),
        Term::App(f, x) => Term::app(shift(f, by, cutoff), shift(x, by, cutoff)),
        other => other.clone(),
    }
}

/// `t[k := u]` where `u` lives outside the binder being removed.
fn subst(t: &Term, k: usize, u: &Term) -> Term {
    match t {
        Term::Bv(i) if *i == k => shift(u, k as isize, 0),
        Term::Bv(i) if *i > k => Term::Bv(i - 1),
        Term::Abs(ty, b) => Term::abs(ty.clone(), subst(b, k + 1, u)),
        Term::App(f, x) => Term::app(subst(f, k, u), subst(x, k, u)),
        other => other.clone(),
    }
}

fn occurs(t: &Term, k: usize) -> bool {
    match t {
        Term::Bv(i) => *i == k,
        Term::Abs(_, b) => occurs(b, k + 1),
        Term::App(f, x) => occurs(f, k) || occurs(x, k),
        _ => false,
    }
}

fn contract_here(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, x) => match &**f {
            Term::Abs(_, b) => Some(subst(b, 0, x)),
            _ => None,
        },
        Term::Abs(_, b) => match &**b {
            Term::App(f, x) if **x == Term::Bv(0) && !occurs(f, 0) => Some(shift(f, -1, 1)),
            _ => None,
        },
        _ => None,
    }
}

fn count_redexes(t: &Term) -> usize {
    let here = usize::from(contract_here(t).is_some());
    here + match t {
        Term::Abs(_, b) => count_redexes(b),
        Term::App(f, x) => count_redexes(f) + count_redexes(x),
        _ => 0,
    }
}

/// Contracts the `n`-th redex in preorder.
fn contract_nth(t: &Term, n: &mut usize) -> Term {
    if let Some(r) = contract_here(t) {
        if *n == 0 {
            *n = usize::MAX;
            return r;
        }
        *n -= 1;
    }
    if *n == usize::MAX {
        return t.clone();
    }
    match t {
        Term::Abs(ty, b) => Term::abs(ty.clone(), contract_nth(b, n)),
        Term::App(f, x) => {
            let f2 = contract_nth(f, n);
            let x2 = if *n == usize::MAX { (**x).clone() } else { contract_nth(x, n) };
            Term::app(f2, x2)
        }
        other => other.clone(),
    }
}

/// Reduces by beta and eta steps at random positions until no redex is
/// left, or gives up after `fuel` steps.
pub fn random_order_normal_form<R: Rng>(rng: &mut R, t: &Term, fuel: usize) -> Option<Term> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        let n = count_redexes(&cur);
        if n == 0 {
            return Some(cur);
        }
        let mut pick = rng.gen_range(0..n);
        cur = contract_nth(&cur, &mut pick);
    }
    None
}
