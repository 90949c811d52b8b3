//! Theory and proof files.
//!
//! Both formats are s-expressions. Names may be written as strings or bare
//! symbols and are always printed as strings. Printing is canonical: one
//! line, single spaces, map entries sorted, axioms in file order.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::proofterm::norm::{beta_eta_norm, DEFAULT_BUDGET};
use crate::proofterm::ProofTerm;
use crate::signature::{class_const_type, const_of_class, eq_axs, std_sig, Signature, Theory};
use crate::sorts::{tcsigs_constant_arity, tcsigs_coregular, tcsigs_sorts_wf, OSig, SubclassRel, TcSigs};
use crate::syntax::{Name, Sort, Term, Typ, Var};
use crate::sexpr::{self, SExpr, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("duplicate declaration: {0}")]
    DuplicateDeclaration(String),
    #[error("theory is not wellformed: {0}")]
    IllFormedTheory(&'static str),
}

fn err(e: &SExpr, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax(SyntaxError::at(e.pos(), msg))
}

fn dup(what: impl Into<String>) -> FormatError {
    FormatError::DuplicateDeclaration(what.into())
}

// ---- names, types, terms ----

fn name_of(e: &SExpr) -> Result<Name, FormatError> {
    e.as_name()
        .and_then(Name::try_new)
        .ok_or_else(|| err(e, "expected a nonempty name"))
}

fn nat_of(e: &SExpr) -> Result<u64, FormatError> {
    e.as_nat().ok_or_else(|| err(e, "expected a natural number"))
}

fn index_of(e: &SExpr) -> Result<usize, FormatError> {
    usize::try_from(nat_of(e)?).map_err(|_| err(e, "index too large"))
}

fn tagged<'a>(e: &'a SExpr, what: &str) -> Result<(&'a str, &'a [SExpr]), FormatError> {
    e.as_tagged()
        .ok_or_else(|| err(e, format!("expected {what}")))
}

fn arity_err(e: &SExpr, head: &str) -> FormatError {
    err(e, format!("wrong number of arguments to {head}"))
}

pub fn var_from_sexpr(e: &SExpr) -> Result<Var, FormatError> {
    match tagged(e, "VAR")? {
        ("named", [n]) => Ok(Var::Named(name_of(n)?)),
        ("idx", [n, k]) => Ok(Var::Indexed(name_of(n)?, nat_of(k)?)),
        (h @ ("named" | "idx"), _) => Err(arity_err(e, h)),
        _ => Err(err(e, "expected VAR")),
    }
}

pub fn var_to_sexpr(v: &Var) -> SExpr {
    match v {
        Var::Named(n) => SExpr::tagged("named", vec![SExpr::str(n.as_str())]),
        Var::Indexed(n, k) => SExpr::tagged("idx", vec![SExpr::str(n.as_str()), SExpr::nat(*k)]),
    }
}

pub fn sort_from_sexpr(e: &SExpr) -> Result<Sort, FormatError> {
    match tagged(e, "SORT")? {
        ("sort", cs) => Ok(Sort::new(cs.iter().map(name_of).collect::<Result<Vec<_>, _>>()?)),
        _ => Err(err(e, "expected SORT")),
    }
}

pub fn sort_to_sexpr(s: &Sort) -> SExpr {
    SExpr::tagged("sort", s.iter().map(|c| SExpr::str(c.as_str())).collect())
}

pub fn typ_from_sexpr(e: &SExpr) -> Result<Typ, FormatError> {
    match tagged(e, "TYPE")? {
        ("ty", [k, args @ ..]) => Ok(Typ::Ty(
            name_of(k)?,
            args.iter().map(typ_from_sexpr).collect::<Result<_, _>>()?,
        )),
        ("tv", [v, s]) => Ok(Typ::Tv(var_from_sexpr(v)?, sort_from_sexpr(s)?)),
        (h @ ("ty" | "tv"), _) => Err(arity_err(e, h)),
        _ => Err(err(e, "expected TYPE")),
    }
}

pub fn typ_to_sexpr(t: &Typ) -> SExpr {
    match t {
        Typ::Ty(k, args) => {
            let mut items = vec![SExpr::str(k.as_str())];
            items.extend(args.iter().map(typ_to_sexpr));
            SExpr::tagged("ty", items)
        }
        Typ::Tv(v, s) => SExpr::tagged("tv", vec![var_to_sexpr(v), sort_to_sexpr(s)]),
    }
}

pub fn term_from_sexpr(e: &SExpr) -> Result<Term, FormatError> {
    match tagged(e, "TERM")? {
        ("ct", [c, ty]) => Ok(Term::Ct(name_of(c)?, typ_from_sexpr(ty)?)),
        ("fv", [v, ty]) => Ok(Term::Fv(var_from_sexpr(v)?, typ_from_sexpr(ty)?)),
        ("bv", [k]) => Ok(Term::Bv(index_of(k)?)),
        ("abs", [ty, b]) => Ok(Term::abs(typ_from_sexpr(ty)?, term_from_sexpr(b)?)),
        ("app", [f, x]) => Ok(Term::app(term_from_sexpr(f)?, term_from_sexpr(x)?)),
        (h @ ("ct" | "fv" | "bv" | "abs" | "app"), _) => Err(arity_err(e, h)),
        _ => Err(err(e, "expected TERM")),
    }
}

pub fn term_to_sexpr(t: &Term) -> SExpr {
    match t {
        Term::Ct(c, ty) => SExpr::tagged("ct", vec![SExpr::str(c.as_str()), typ_to_sexpr(ty)]),
        Term::Fv(v, ty) => SExpr::tagged("fv", vec![var_to_sexpr(v), typ_to_sexpr(ty)]),
        Term::Bv(k) => SExpr::tagged("bv", vec![SExpr::nat(*k as u64)]),
        Term::Abs(ty, b) => SExpr::tagged("abs", vec![typ_to_sexpr(ty), term_to_sexpr(b)]),
        Term::App(f, x) => SExpr::tagged("app", vec![term_to_sexpr(f), term_to_sexpr(x)]),
    }
}

pub fn parse_term(input: &str) -> Result<Term, FormatError> {
    term_from_sexpr(&sexpr::parse(input)?)
}

// ---- proofs ----

pub fn proof_from_sexpr(e: &SExpr) -> Result<ProofTerm, FormatError> {
    match tagged(e, "PROOF")? {
        ("paxm", [t, inst]) => {
            let entries = inst
                .as_seq()
                .ok_or_else(|| err(inst, "expected instantiation list"))?;
            let mut seen = BTreeSet::new();
            let mut rho = Vec::new();
            for entry in entries {
                let [v, s, ty] = entry
                    .as_seq()
                    .ok_or_else(|| err(entry, "expected (VAR SORT TYPE)"))?
                else {
                    return Err(err(entry, "expected (VAR SORT TYPE)"));
                };
                let key = (var_from_sexpr(v)?, sort_from_sexpr(s)?);
                if !seen.insert(key.clone()) {
                    return Err(dup(format!("instantiation of {:?}", key.0)));
                }
                rho.push((key, typ_from_sexpr(ty)?));
            }
            Ok(ProofTerm::PAxm(term_from_sexpr(t)?, rho))
        }
        ("pbound", [k]) => Ok(ProofTerm::PBound(index_of(k)?)),
        ("abst", [ty, p]) => Ok(ProofTerm::abst(typ_from_sexpr(ty)?, proof_from_sexpr(p)?)),
        ("absp", [t, p]) => Ok(ProofTerm::absp(term_from_sexpr(t)?, proof_from_sexpr(p)?)),
        ("appt", [p, t]) => Ok(ProofTerm::appt(proof_from_sexpr(p)?, term_from_sexpr(t)?)),
        ("appp", [p, q]) => Ok(ProofTerm::appp(proof_from_sexpr(p)?, proof_from_sexpr(q)?)),
        ("ofclass", [ty, c]) => Ok(ProofTerm::OfClass(typ_from_sexpr(ty)?, name_of(c)?)),
        ("hyp", [t]) => Ok(ProofTerm::Hyp(term_from_sexpr(t)?)),
        (
            h @ ("paxm" | "pbound" | "abst" | "absp" | "appt" | "appp" | "ofclass" | "hyp"),
            _,
        ) => Err(arity_err(e, h)),
        _ => Err(err(e, "expected PROOF")),
    }
}

pub fn proof_to_sexpr(p: &ProofTerm) -> SExpr {
    match p {
        ProofTerm::PAxm(t, rho) => {
            let inst = rho
                .iter()
                .map(|((v, s), ty)| {
                    SExpr::seq(vec![var_to_sexpr(v), sort_to_sexpr(s), typ_to_sexpr(ty)])
                })
                .collect();
            SExpr::tagged("paxm", vec![term_to_sexpr(t), SExpr::seq(inst)])
        }
        ProofTerm::PBound(k) => SExpr::tagged("pbound", vec![SExpr::nat(*k as u64)]),
        ProofTerm::Abst(ty, p) => SExpr::tagged("abst", vec![typ_to_sexpr(ty), proof_to_sexpr(p)]),
        ProofTerm::AbsP(t, p) => SExpr::tagged("absp", vec![term_to_sexpr(t), proof_to_sexpr(p)]),
        ProofTerm::Appt(p, t) => SExpr::tagged("appt", vec![proof_to_sexpr(p), term_to_sexpr(t)]),
        ProofTerm::AppP(p, q) => SExpr::tagged("appp", vec![proof_to_sexpr(p), proof_to_sexpr(q)]),
        ProofTerm::OfClass(ty, c) => {
            SExpr::tagged("ofclass", vec![typ_to_sexpr(ty), SExpr::str(c.as_str())])
        }
        ProofTerm::Hyp(t) => SExpr::tagged("hyp", vec![term_to_sexpr(t)]),
    }
}

/// A proof together with the proposition it claims to prove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    pub proof: ProofTerm,
    pub claim: Term,
}

impl ProofFile {
    pub fn from_sexpr(e: &SExpr) -> Result<ProofFile, FormatError> {
        match tagged(e, "(check PROOF TERM)")? {
            ("check", [p, t]) => Ok(ProofFile {
                proof: proof_from_sexpr(p)?,
                claim: term_from_sexpr(t)?,
            }),
            ("check", _) => Err(arity_err(e, "check")),
            _ => Err(err(e, "expected (check PROOF TERM)")),
        }
    }

    pub fn to_sexpr(&self) -> SExpr {
        SExpr::tagged("check", vec![proof_to_sexpr(&self.proof), term_to_sexpr(&self.claim)])
    }

    /// Canonical text, newline terminated.
    pub fn print(&self) -> String {
        format!("{}\n", self.to_sexpr())
    }
}

pub fn parse_proof(input: &str) -> Result<ProofFile, FormatError> {
    ProofFile::from_sexpr(&sexpr::parse(input)?)
}

// ---- theories ----

/// The declarations of a theory file, before standard content is added.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TheoryFile {
    pub no_std: bool,
    pub classes: BTreeSet<Name>,
    /// Generator pairs `(c, d)` meaning `c` is a subclass of `d`.
    pub sub: BTreeSet<(Name, Name)>,
    pub tcsigs: TcSigs,
    pub arities: BTreeMap<Name, usize>,
    pub consts: BTreeMap<Name, Typ>,
    pub axioms: Vec<Term>,
}

const SECTIONS: [&str; 6] = ["no-std", "classes", "tcsigs", "arities", "consts", "axioms"];

impl TheoryFile {
    pub fn from_sexpr(e: &SExpr) -> Result<TheoryFile, FormatError> {
        let body = match tagged(e, "(theory ...)")? {
            ("theory", body) => body,
            _ => return Err(err(e, "expected (theory ...)")),
        };
        let mut file = TheoryFile::default();
        let mut seen = BTreeSet::new();
        for section in body {
            let (head, items) = tagged(section, "a theory section")?;
            if !SECTIONS.contains(&head) {
                return Err(err(section, format!("unknown section {head}")));
            }
            if !seen.insert(head) {
                return Err(dup(format!("section {head}")));
            }
            match head {
                "no-std" if items.is_empty() => file.no_std = true,
                "no-std" => return Err(arity_err(section, head)),
                "classes" => file.read_classes(items)?,
                "tcsigs" => file.read_tcsigs(items)?,
                "arities" => {
                    for item in items {
                        let [k, n] = pair(item)?;
                        let n = usize::try_from(nat_of(n)?).map_err(|_| err(n, "arity too large"))?;
                        if file.arities.insert(name_of(k)?, n).is_some() {
                            return Err(dup(format!("arity of {}", k.as_name().unwrap_or(""))));
                        }
                    }
                }
                "consts" => {
                    for item in items {
                        let [c, ty] = pair(item)?;
                        if file.consts.insert(name_of(c)?, typ_from_sexpr(ty)?).is_some() {
                            return Err(dup(format!("constant {}", c.as_name().unwrap_or(""))));
                        }
                    }
                }
                _ => {
                    for item in items {
                        let t = term_from_sexpr(item)?;
                        if file.axioms.contains(&t) {
                            return Err(dup(format!("axiom {item}")));
                        }
                        file.axioms.push(t);
                    }
                }
            }
        }
        Ok(file)
    }

    fn read_classes(&mut self, items: &[SExpr]) -> Result<(), FormatError> {
        for item in items {
            if let Some(("sub", pairs)) = item.as_tagged() {
                for p in pairs {
                    let [c, d] = pair(p)?;
                    if !self.sub.insert((name_of(c)?, name_of(d)?)) {
                        return Err(dup(format!("subclass pair {p}")));
                    }
                }
            } else if !self.classes.insert(name_of(item)?) {
                return Err(dup(format!("class {item}")));
            }
        }
        Ok(())
    }

    fn read_tcsigs(&mut self, items: &[SExpr]) -> Result<(), FormatError> {
        for item in items {
            let entries = item
                .as_seq()
                .filter(|s| !s.is_empty())
                .ok_or_else(|| err(item, "expected (K (C (SORT...))...)"))?;
            let k = name_of(&entries[0])?;
            if self.tcsigs.contains_key(&k) {
                return Err(dup(format!("signatures of {k}")));
            }
            let mut dm = BTreeMap::new();
            for entry in &entries[1..] {
                let [c, sorts] = pair(entry)?;
                let sorts = sorts
                    .as_seq()
                    .ok_or_else(|| err(sorts, "expected a list of sorts"))?
                    .iter()
                    .map(sort_from_sexpr)
                    .collect::<Result<Vec<_>, _>>()?;
                if dm.insert(name_of(c)?, sorts).is_some() {
                    return Err(dup(format!("signature {k} :: {entry}")));
                }
            }
            self.tcsigs.insert(k, dm);
        }
        Ok(())
    }

    pub fn to_sexpr(&self) -> SExpr {
        let mut sections = Vec::new();
        if self.no_std {
            sections.push(SExpr::tagged("no-std", vec![]));
        }
        if !self.classes.is_empty() || !self.sub.is_empty() {
            let mut items: Vec<SExpr> =
                self.classes.iter().map(|c| SExpr::str(c.as_str())).collect();
            if !self.sub.is_empty() {
                items.push(SExpr::tagged(
                    "sub",
                    self.sub
                        .iter()
                        .map(|(c, d)| SExpr::seq(vec![SExpr::str(c.as_str()), SExpr::str(d.as_str())]))
                        .collect(),
                ));
            }
            sections.push(SExpr::tagged("classes", items));
        }
        if !self.tcsigs.is_empty() {
            let items = self
                .tcsigs
                .iter()
                .map(|(k, dm)| {
                    let mut entry = vec![SExpr::str(k.as_str())];
                    entry.extend(dm.iter().map(|(c, ss)| {
                        SExpr::seq(vec![
                            SExpr::str(c.as_str()),
                            SExpr::seq(ss.iter().map(sort_to_sexpr).collect()),
                        ])
                    }));
                    SExpr::seq(entry)
                })
                .collect();
            sections.push(SExpr::tagged("tcsigs", items));
        }
        if !self.arities.is_empty() {
            let items = self
                .arities
                .iter()
                .map(|(k, n)| SExpr::seq(vec![SExpr::str(k.as_str()), SExpr::nat(*n as u64)]))
                .collect();
            sections.push(SExpr::tagged("arities", items));
        }
        if !self.consts.is_empty() {
            let items = self
                .consts
                .iter()
                .map(|(c, ty)| SExpr::seq(vec![SExpr::str(c.as_str()), typ_to_sexpr(ty)]))
                .collect();
            sections.push(SExpr::tagged("consts", items));
        }
        if !self.axioms.is_empty() {
            sections.push(SExpr::tagged(
                "axioms",
                self.axioms.iter().map(term_to_sexpr).collect(),
            ));
        }
        SExpr::tagged("theory", sections)
    }

    /// Canonical text, newline terminated.
    pub fn print(&self) -> String {
        format!("{}\n", self.to_sexpr())
    }

    /// Every class mentioned by the file.
    pub fn class_names(&self) -> BTreeSet<Name> {
        let mut all = self.classes.clone();
        for (c, d) in &self.sub {
            all.insert(c.clone());
            all.insert(d.clone());
        }
        all
    }

    /// The reflexive-transitive closure of the generator pairs over the
    /// declared classes.
    pub fn subclass_closure(&self) -> SubclassRel {
        let classes = self.class_names();
        let mut rel: BTreeSet<(Name, Name)> = classes.iter().map(|c| (c.clone(), c.clone())).collect();
        rel.extend(self.sub.iter().cloned());
        loop {
            let mut added = Vec::new();
            for (a, b) in &rel {
                for (b2, c) in rel.range((b.clone(), min_name())..) {
                    if b2 != b {
                        break;
                    }
                    if !rel.contains(&(a.clone(), c.clone())) {
                        added.push((a.clone(), c.clone()));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            rel.extend(added);
        }
        SubclassRel::from_pairs(rel)
    }

    /// Builds the theory: closes the subclass relation, adds the standard
    /// content unless `no-std` is set, normalizes user axioms and checks
    /// wellformedness.
    pub fn load(&self) -> Result<Theory, FormatError> {
        let mut sig = if self.no_std { Signature::default() } else { std_sig() };
        let std = sig.clone();
        for (k, n) in &self.arities {
            if std.type_arity.contains_key(k) {
                return Err(dup(format!("type constructor {k}")));
            }
            sig.type_arity.insert(k.clone(), *n);
        }
        for (c, ty) in &self.consts {
            if std.const_type.contains_key(c) {
                return Err(dup(format!("constant {c}")));
            }
            sig.const_type.insert(c.clone(), ty.clone());
        }
        let sub = self.subclass_closure();
        if !self.no_std {
            for c in self.class_names() {
                let cc = const_of_class(&c);
                if sig.const_type.insert(cc.clone(), class_const_type()).is_some() {
                    return Err(dup(format!("constant {cc}")));
                }
            }
        }
        let mut tcs = sig.osig.tcs.clone();
        for (k, dm) in &self.tcsigs {
            tcs.insert(k.clone(), dm.clone());
        }
        for k in self.arities.keys() {
            tcs.entry(k.clone()).or_default();
        }
        sig.osig = OSig::new(sub, tcs);

        let mut axioms: BTreeSet<Term> = if self.no_std {
            BTreeSet::new()
        } else {
            eq_axs().iter().cloned().collect()
        };
        for ax in &self.axioms {
            let ax = if eq_axs().contains(ax) {
                ax.clone()
            } else {
                beta_eta_norm(ax, DEFAULT_BUDGET).unwrap_or_else(|| ax.clone())
            };
            axioms.insert(ax);
        }
        let thy = Theory { sig, axioms };
        match failing_conjunct(&thy) {
            Some(c) => Err(FormatError::IllFormedTheory(c)),
            None => Ok(thy),
        }
    }
}

fn min_name() -> Name {
    Name::from("\0")
}

fn pair(e: &SExpr) -> Result<&[SExpr; 2], FormatError> {
    e.as_seq()
        .and_then(|s| <&[SExpr; 2]>::try_from(s).ok())
        .ok_or_else(|| err(e, "expected a pair"))
}

/// The first wellformedness condition the theory violates, if any.
pub fn failing_conjunct(thy: &Theory) -> Option<&'static str> {
    let sig = &thy.sig;
    let sub = &sig.osig.sub;
    let tcs = &sig.osig.tcs;
    let checks: [(&'static str, &dyn Fn() -> bool); 9] = [
        ("wf-subclass", &|| sub.is_wf()),
        ("wf-tcsigs", &|| tcsigs_coregular(sub, tcs)),
        ("wf-tcsigs", &|| tcsigs_constant_arity(tcs)),
        ("wf-tcsigs", &|| tcsigs_sorts_wf(sub, tcs)),
        ("tcsigs-arities", &|| sig.tcsigs_match_arities()),
        ("const-types", &|| sig.const_types_wf()),
        ("std-sig", &|| crate::signature::is_std_sig(sig)),
        ("axioms", &|| thy.axioms_wf()),
        ("eq-axs", &|| thy.has_eq_axs()),
    ];
    for (name, check) in checks {
        if !check() {
            return Some(name);
        }
    }
    if thy.is_wf() {
        None
    } else {
        Some("wf-theory")
    }
}

pub fn parse_theory_file(input: &str) -> Result<TheoryFile, FormatError> {
    TheoryFile::from_sexpr(&sexpr::parse(input)?)
}

pub fn parse_theory(input: &str) -> Result<Theory, FormatError> {
    parse_theory_file(input)?.load()
}
