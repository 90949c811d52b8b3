//! The hand-built fixture corpus. Files under `tests/fixtures` are generated
//! from these builders and checked byte for byte by the golden test.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use mlcheck::format::{ProofFile, TheoryFile};
use mlcheck::proofterm::ProofTerm;
use mlcheck::signature::{eq_axs, mk_all, mk_eq, mk_imp, AX_REFL, AX_SYM, AX_TRANS};
use mlcheck::syntax::{Name, Sort, Term, Typ, Var};

pub fn prop() -> Typ {
    Typ::prop()
}

pub fn fv(name: &str, ty: Typ) -> Term {
    Term::fv(name, ty)
}

fn a_is(ty: Typ) -> Vec<((Var, Sort), Typ)> {
    vec![((Var::named("'a"), Sort::empty()), ty)]
}

fn paxm(idx: usize, ty: Typ) -> ProofTerm {
    ProofTerm::PAxm(eq_axs()[idx].clone(), a_is(ty))
}

fn x() -> Term {
    fv("x", prop())
}

fn y() -> Term {
    fv("y", prop())
}

fn z() -> Term {
    fv("z", prop())
}

fn pa() -> Term {
    fv("A", prop())
}

fn pb() -> Term {
    fv("B", prop())
}

fn eqp(l: Term, r: Term) -> Term {
    mk_eq(&prop(), l, r)
}

fn pp() -> Typ {
    Typ::fun(prop(), prop())
}

pub fn nat() -> Typ {
    Typ::con("nat", vec![])
}

pub fn list(t: Typ) -> Typ {
    Typ::con("list", vec![t])
}

/// `c_class (TYPE :: T itself)`
pub fn of_class_prop(ty: Typ, c: &str) -> Term {
    let it = Typ::itself(ty);
    Term::app(
        Term::ct(&format!("{c}_class"), Typ::fun(it.clone(), prop())),
        Term::ct("type", it),
    )
}

pub fn minimal_theory() -> TheoryFile {
    TheoryFile::default()
}

/// Two classes `linord ⊆ ord`; `nat :: linord`, `nat :: ord`,
/// `list :: (ord) ord`.
pub fn toy_theory() -> TheoryFile {
    let n = |s: &str| Name::from(s);
    let mut tcsigs = BTreeMap::new();
    tcsigs.insert(
        n("nat"),
        BTreeMap::from([(n("linord"), vec![]), (n("ord"), vec![])]),
    );
    tcsigs.insert(n("list"), BTreeMap::from([(n("ord"), vec![Sort::of(&["ord"])])]));
    TheoryFile {
        no_std: false,
        classes: BTreeSet::from([n("linord"), n("ord")]),
        sub: BTreeSet::from([(n("linord"), n("ord"))]),
        tcsigs,
        arities: BTreeMap::from([(n("list"), 1), (n("nat"), 0)]),
        consts: BTreeMap::from([(n("zero"), nat())]),
        axioms: vec![],
    }
}

/// Declares the standard type constructors but no constants or axioms.
pub fn broken_theory() -> TheoryFile {
    let n = |s: &str| Name::from(s);
    TheoryFile {
        no_std: true,
        tcsigs: BTreeMap::from([
            (n("fun"), BTreeMap::new()),
            (n("itself"), BTreeMap::new()),
            (n("prop"), BTreeMap::new()),
        ]),
        arities: BTreeMap::from([(n("fun"), 2), (n("itself"), 1), (n("prop"), 0)]),
        ..TheoryFile::default()
    }
}

pub fn theories() -> Vec<(&'static str, TheoryFile)> {
    vec![
        ("minimal", minimal_theory()),
        ("toy", toy_theory()),
        ("broken", broken_theory()),
    ]
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub theory: &'static str,
    pub name: &'static str,
    pub accept: bool,
    pub file: ProofFile,
}

fn fx(theory: &'static str, name: &'static str, accept: bool, proof: ProofTerm, claim: Term) -> Fixture {
    Fixture {
        theory,
        name,
        accept,
        file: ProofFile { proof, claim },
    }
}

fn identity() -> ProofTerm {
    ProofTerm::absp(pa(), ProofTerm::PBound(0))
}

/// `x ≡ y ⟹ y ≡ z ⟹ x ≡ z`, from the transitivity axiom.
fn trans_chain() -> ProofTerm {
    ProofTerm::absp(
        eqp(x(), y()),
        ProofTerm::absp(
            eqp(y(), z()),
            ProofTerm::appp(
                ProofTerm::appp(paxm(AX_TRANS, prop()), ProofTerm::PBound(1)),
                ProofTerm::PBound(0),
            ),
        ),
    )
}

/// `⋀p. p ⟹ p`
fn forall_identity() -> ProofTerm {
    ProofTerm::abst(prop(), ProofTerm::absp(Term::Bv(0), ProofTerm::PBound(0)))
}

pub fn fixtures() -> Vec<Fixture> {
    let imp = mk_imp;
    let beta_lhs = Term::app(Term::abs(prop(), Term::Bv(0)), x());
    let xf = fv("x", pp());
    let eta_lhs = Term::abs(prop(), Term::app(xf.clone(), Term::Bv(0)));
    let sym = ProofTerm::absp(
        eqp(x(), y()),
        ProofTerm::appp(paxm(AX_SYM, prop()), ProofTerm::PBound(0)),
    );
    let sym_claim = imp(eqp(x(), y()), eqp(y(), x()));
    let trans_claim = imp(eqp(x(), y()), imp(eqp(y(), z()), eqp(x(), z())));
    // (λf. λq. f q) x ≡ λq. x q, which is subst_bv x (λq. Bv1 q)
    let beta_eta_lhs = Term::app(
        Term::abs(pp(), Term::abs(prop(), Term::app(Term::Bv(1), Term::Bv(0)))),
        xf.clone(),
    );
    let beta_eta_rhs = Term::abs(prop(), Term::app(xf.clone(), Term::Bv(0)));
    let all_id_claim = mk_all(&prop(), imp(Term::Bv(0), Term::Bv(0)));
    let a_sort = |s: Sort| Typ::tvar("'a", s);

    vec![
        // accepted, minimal theory
        fx("minimal", "identity", true, identity(), imp(pa(), pa())),
        fx("minimal", "refl", true, paxm(AX_REFL, prop()), eqp(x(), x())),
        fx("minimal", "sym", true, sym.clone(), sym_claim.clone()),
        fx("minimal", "trans_chain", true, trans_chain(), trans_claim.clone()),
        fx(
            "minimal",
            "trans_with_hyp",
            true,
            // the chain applied to a bound and a free assumption
            ProofTerm::absp(
                eqp(x(), y()),
                ProofTerm::appp(
                    ProofTerm::appp(trans_chain(), ProofTerm::PBound(0)),
                    ProofTerm::Hyp(eqp(y(), z())),
                ),
            ),
            imp(eqp(x(), y()), eqp(x(), z())),
        ),
        fx("minimal", "beta", true, paxm(AX_REFL, prop()), eqp(beta_lhs.clone(), x())),
        fx(
            "minimal",
            "beta_subst",
            true,
            paxm(AX_REFL, pp()),
            mk_eq(&pp(), beta_eta_lhs.clone(), beta_eta_rhs),
        ),
        fx("minimal", "eta", true, paxm(AX_REFL, pp()), mk_eq(&pp(), eta_lhs.clone(), xf.clone())),
        fx("minimal", "forall_intro", true, forall_identity(), all_id_claim.clone()),
        fx(
            "minimal",
            "forall_round_trip",
            true,
            ProofTerm::appt(forall_identity(), pa()),
            imp(pa(), pa()),
        ),
        fx(
            "minimal",
            "forall_instantiate_eq",
            true,
            // ⋀p. p ⟹ p at the instance A ≡ B
            ProofTerm::appt(forall_identity(), eqp(pa(), pb())),
            imp(eqp(pa(), pb()), eqp(pa(), pb())),
        ),
        fx(
            "minimal",
            "modus_ponens",
            true,
            ProofTerm::absp(
                imp(pa(), pb()),
                ProofTerm::absp(pa(), ProofTerm::appp(ProofTerm::PBound(1), ProofTerm::PBound(0))),
            ),
            imp(imp(pa(), pb()), imp(pa(), pb())),
        ),
        fx(
            "minimal",
            "free_hyp",
            true,
            ProofTerm::appp(ProofTerm::Hyp(imp(pa(), pb())), ProofTerm::Hyp(pa())),
            pb(),
        ),
        fx(
            "minimal",
            "beta_in_hyp",
            true,
            ProofTerm::absp(Term::app(Term::abs(prop(), Term::Bv(0)), pa()), ProofTerm::PBound(0)),
            imp(Term::app(Term::abs(prop(), Term::Bv(0)), pa()), pa()),
        ),
        // accepted, toy theory
        fx("toy", "ofclass_nat", true, ProofTerm::OfClass(nat(), "ord".into()), of_class_prop(nat(), "ord")),
        fx(
            "toy",
            "ofclass_nat_linord",
            true,
            ProofTerm::OfClass(nat(), "linord".into()),
            of_class_prop(nat(), "linord"),
        ),
        fx(
            "toy",
            "ofclass_list",
            true,
            ProofTerm::OfClass(list(list(nat())), "ord".into()),
            of_class_prop(list(list(nat())), "ord"),
        ),
        fx(
            "toy",
            "ofclass_tvar",
            true,
            ProofTerm::OfClass(list(a_sort(Sort::of(&["linord"]))), "ord".into()),
            of_class_prop(list(a_sort(Sort::of(&["linord"]))), "ord"),
        ),
        fx(
            "toy",
            "refl_nat",
            true,
            paxm(AX_REFL, nat()),
            mk_eq(&nat(), fv("x", nat()), fv("x", nat())),
        ),
        // rejected
        fx("minimal", "identity_wrong_claim", false, identity(), imp(pa(), pb())),
        fx("minimal", "identity_unbound", false, ProofTerm::absp(pa(), ProofTerm::PBound(1)), imp(pa(), pa())),
        fx("minimal", "sym_wrong_claim", false, sym.clone(), imp(eqp(y(), x()), eqp(x(), y()))),
        fx(
            "minimal",
            "trans_swapped",
            false,
            ProofTerm::absp(
                eqp(x(), y()),
                ProofTerm::absp(
                    eqp(y(), z()),
                    ProofTerm::appp(
                        ProofTerm::appp(paxm(AX_TRANS, prop()), ProofTerm::PBound(0)),
                        ProofTerm::PBound(1),
                    ),
                ),
            ),
            trans_claim,
        ),
        fx(
            "minimal",
            "sym_premise_mismatch",
            false,
            ProofTerm::appp(paxm(AX_SYM, prop()), ProofTerm::Hyp(eqp(y(), x()))),
            eqp(x(), y()),
        ),
        fx("minimal", "beta_wrong_claim", false, paxm(AX_REFL, prop()), eqp(beta_lhs, y())),
        fx("minimal", "eta_wrong_claim", false, paxm(AX_REFL, pp()), mk_eq(&pp(), eta_lhs, fv("g", pp()))),
        fx("minimal", "refl_undeclared_type", false, paxm(AX_REFL, nat()), mk_eq(&nat(), fv("x", nat()), fv("x", nat()))),
        fx(
            "minimal",
            "not_an_axiom",
            false,
            ProofTerm::PAxm(imp(pa(), pa()), vec![]),
            imp(pa(), pa()),
        ),
        fx(
            "minimal",
            "forall_arg_type",
            false,
            ProofTerm::appt(forall_identity(), xf),
            imp(pa(), pa()),
        ),
        fx("minimal", "appt_not_forall", false, ProofTerm::appt(identity(), pa()), imp(pa(), pa())),
        fx(
            "minimal",
            "eigenvariable",
            false,
            ProofTerm::abst(prop(), ProofTerm::Hyp(Term::Bv(0))),
            all_id_claim,
        ),
        fx(
            "minimal",
            "absp_not_prop",
            false,
            ProofTerm::absp(fv("x", a_sort(Sort::empty())), ProofTerm::PBound(0)),
            imp(pa(), pa()),
        ),
        fx("minimal", "hyp_not_prop", false, ProofTerm::Hyp(fv("x", pp())), pa()),
        fx(
            "minimal",
            "ofclass_no_class",
            false,
            ProofTerm::OfClass(prop(), "ord".into()),
            of_class_prop(prop(), "ord"),
        ),
        fx(
            "toy",
            "ofclass_list_bad_arg",
            false,
            ProofTerm::OfClass(list(a_sort(Sort::empty())), "ord".into()),
            of_class_prop(list(a_sort(Sort::empty())), "ord"),
        ),
        fx(
            "toy",
            "ofclass_list_not_linord",
            false,
            ProofTerm::OfClass(list(nat()), "linord".into()),
            of_class_prop(list(nat()), "linord"),
        ),
        fx(
            "toy",
            "ofclass_wrong_claim",
            false,
            ProofTerm::OfClass(nat(), "ord".into()),
            of_class_prop(nat(), "linord"),
        ),
        fx("broken", "identity_ill_formed_theory", false, identity(), imp(pa(), pa())),
    ]
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn theory_path(theory: &str) -> PathBuf {
    fixture_dir().join(theory).join("theory.thy")
}

impl Fixture {
    pub fn path(&self) -> PathBuf {
        let verdict = if self.accept { "accept" } else { "reject" };
        fixture_dir()
            .join(self.theory)
            .join(verdict)
            .join(format!("{}.proof", self.name))
    }
}

/// Every corpus file with its canonical contents.
pub fn expected_files() -> Vec<(PathBuf, String)> {
    let mut files: Vec<(PathBuf, String)> = theories()
        .into_iter()
        .map(|(name, thy)| (theory_path(name), thy.print()))
        .collect();
    files.extend(fixtures().into_iter().map(|f| (f.path(), f.file.print())));
    files
}

/// Writes the corpus when `update` is set; returns the files whose contents
/// differ from the builders.
pub fn sync_golden(update: bool) -> Vec<PathBuf> {
    let mut mismatched = Vec::new();
    for (path, text) in expected_files() {
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
            mismatched.push(path);
        }
    }
    mismatched
}

/// All files under the fixture directory.
pub fn files_on_disk() -> Vec<PathBuf> {
    fn walk(dir: &Path, acc: &mut Vec<PathBuf>) {
        let Ok(entries) = std::fs::read_dir(dir) else {
            return;
        };
        for e in entries.flatten() {
            let p = e.path();
            if p.is_dir() {
                walk(&p, acc);
            } else {
                acc.push(p);
            }
        }
    }
    let mut acc = Vec::new();
    walk(&fixture_dir(), &mut acc);
    acc.sort();
    acc
}
