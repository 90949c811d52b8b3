//! Order-sorted signatures: the subclass order, sorts over it, and the
//! has-sort judgment for types.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Name, Sort, Typ};

/// The subclass relation, stored as the full reflexive-transitive relation.
/// `(c1, c2)` means `c1` is a subclass of `c2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubclassRel(BTreeSet<(Name, Name)>);

impl SubclassRel {
    pub fn new() -> SubclassRel {
        SubclassRel::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Name, Name)>>(pairs: I) -> SubclassRel {
        SubclassRel(pairs.into_iter().collect())
    }

    pub fn insert(&mut self, c1: Name, c2: Name) -> bool {
        self.0.insert((c1, c2))
    }

    pub fn pairs(&self) -> &BTreeSet<(Name, Name)> {
        &self.0
    }

    pub fn class_le(&self, c1: &Name, c2: &Name) -> bool {
        self.0.contains(&(c1.clone(), c2.clone()))
    }

    /// Every class mentioned on either side of the relation.
    pub fn field(&self) -> BTreeSet<Name> {
        self.0
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    /// Partial order with reflexivity restricted to the field.
    pub fn is_wf(&self) -> bool {
        let field = self.field();
        let reflexive = field.iter().all(|c| self.class_le(c, c));
        let antisymmetric = self
            .0
            .iter()
            .all(|(a, b)| a == b || !self.class_le(b, a));
        let transitive = self.0.iter().all(|(a, b)| {
            self.0
                .range((b.clone(), min_name())..)
                .take_while(|(b2, _)| b2 == b)
                .all(|(_, c)| self.class_le(a, c))
        });
        reflexive && antisymmetric && transitive
    }

    /// Superclasses of `c`, including `c` itself when it is in the field.
    pub fn supers<'a>(&'a self, c: &'a Name) -> impl Iterator<Item = &'a Name> + 'a {
        self.0
            .range((c.clone(), min_name())..)
            .take_while(move |(a, _)| a == c)
            .map(|(_, b)| b)
    }
}

fn min_name() -> Name {
    // Smallest nonempty string; range scans start here.
    Name::from("\0")
}

/// `S1 <= S2`: every class of `S2` is implied by some class of `S1`.
pub fn subsort_le(sub: &SubclassRel, s1: &Sort, s2: &Sort) -> bool {
    s2.iter().all(|c2| s1.iter().any(|c1| sub.class_le(c1, c2)))
}

/// Drops the classes that are strictly implied by another class of the sort.
pub fn normalize_sort(sub: &SubclassRel, s: &Sort) -> Sort {
    Sort::new(
        s.iter()
            .filter(|c| {
                !s.iter()
                    .any(|c2| sub.class_le(c2, c) && !sub.class_le(c, c2))
            })
            .cloned(),
    )
}

pub fn normalized_sort(sub: &SubclassRel, s: &Sort) -> bool {
    normalize_sort(sub, s) == *s
}

pub fn wf_sort(sub: &SubclassRel, s: &Sort) -> bool {
    if s.is_empty() {
        return true;
    }
    let field = sub.field();
    normalized_sort(sub, s) && s.iter().all(|c| field.contains(c))
}

/// Type constructor signatures: `tcs[κ][c] = Ss` states `κ :: (Ss) c`.
pub type TcSigs = BTreeMap<Name, BTreeMap<Name, Vec<Sort>>>;

/// The triple view `(κ, Ss, c)` of the constructor signatures.
pub fn tcs_triples(tcs: &TcSigs) -> BTreeSet<(Name, Vec<Sort>, Name)> {
    tcs.iter()
        .flat_map(|(k, dm)| {
            dm.iter()
                .map(move |(c, ss)| (k.clone(), ss.clone(), c.clone()))
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OSig {
    pub sub: SubclassRel,
    pub tcs: TcSigs,
}

impl OSig {
    pub fn new(sub: SubclassRel, tcs: TcSigs) -> OSig {
        OSig { sub, tcs }
    }

    /// Whether `ty` satisfies every class constraint in `s`.
    ///
    /// A constructor without any signature entry only has the empty sort.
    pub fn has_sort(&self, ty: &Typ, s: &Sort) -> bool {
        match ty {
            Typ::Tv(_, s0) => subsort_le(&self.sub, s0, s),
            Typ::Ty(k, args) => {
                if s.is_empty() {
                    return true;
                }
                let Some(dm) = self.tcs.get(k) else {
                    return false;
                };
                s.iter().all(|c| match dm.get(c) {
                    Some(ss) => {
                        ss.len() == args.len()
                            && args.iter().zip(ss).all(|(a, sa)| self.has_sort(a, sa))
                    }
                    None => false,
                })
            }
        }
    }

    pub fn is_wf(&self) -> bool {
        self.sub.is_wf() && wf_tcsigs(&self.sub, &self.tcs)
    }
}

pub fn wf_osig(oss: &OSig) -> bool {
    oss.is_wf()
}

/// Superclass closure with coregularity: every signature for `c1` has a
/// dominating signature for each superclass of `c1`.
pub fn tcsigs_coregular(sub: &SubclassRel, tcs: &TcSigs) -> bool {
    tcs.values().all(|dm| {
        dm.iter().all(|(c1, ss1)| {
            sub.supers(c1).all(|c2| match dm.get(c2) {
                Some(ss2) => {
                    ss1.len() == ss2.len()
                        && ss1.iter().zip(ss2).all(|(a, b)| subsort_le(sub, a, b))
                }
                None => false,
            })
        })
    })
}

/// All signatures of a constructor have the same number of arguments.
pub fn tcsigs_constant_arity(tcs: &TcSigs) -> bool {
    tcs.values().all(|dm| {
        let mut lens = dm.values().map(Vec::len);
        match lens.next() {
            Some(n) => lens.all(|m| m == n),
            None => true,
        }
    })
}

/// Every argument sort is normalized and built from known classes.
pub fn tcsigs_sorts_wf(sub: &SubclassRel, tcs: &TcSigs) -> bool {
    tcs.values()
        .flat_map(|dm| dm.values())
        .flatten()
        .all(|s| wf_sort(sub, s))
}

pub fn wf_tcsigs(sub: &SubclassRel, tcs: &TcSigs) -> bool {
    tcsigs_coregular(sub, tcs) && tcsigs_constant_arity(tcs) && tcsigs_sorts_wf(sub, tcs)
}
