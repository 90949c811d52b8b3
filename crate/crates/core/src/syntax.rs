//! Types and terms of the metalogic.
//!
//! Terms use De Bruijn indices for bound variables, so alpha-equivalent terms
//! are structurally equal. Every function here is total: terms with loose
//! indices or inconsistent annotations are accepted and treated the same way
//! as well-formed ones. Wellformedness lives in [`crate::signature`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// A nonempty identifier. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    /// Returns `None` for the empty string.
    pub fn try_new(s: &str) -> Option<Name> {
        if s.is_empty() {
            None
        } else {
            Some(Name(Arc::from(s)))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    /// Panics on the empty string.
    fn from(s: &str) -> Self {
        Name::try_new(s).expect("names must be nonempty")
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Free variable names, shared by term variables and type variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Named(Name),
    Indexed(Name, u64),
}

impl Var {
    pub fn named(s: &str) -> Var {
        Var::Named(Name::from(s))
    }

    pub fn name(&self) -> &Name {
        match self {
            Var::Named(n) | Var::Indexed(n, _) => n,
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Named(n) => write!(f, "{n}"),
            Var::Indexed(n, i) => write!(f, "?{n}.{i}"),
        }
    }
}

/// A set of class names, kept sorted and duplicate-free so that set equality
/// is structural equality.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Vec<Name>);

impl Sort {
    pub fn empty() -> Sort {
        Sort(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = Name>>(classes: I) -> Sort {
        let mut v: Vec<Name> = classes.into_iter().collect();
        v.sort();
        v.dedup();
        Sort(v)
    }

    pub fn of(classes: &[&str]) -> Sort {
        Sort::new(classes.iter().map(|c| Name::from(*c)))
    }

    pub fn classes(&self) -> &[Name] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Name> {
        self.0.iter()
    }

    pub fn contains(&self, c: &Name) -> bool {
        self.0.binary_search(c).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Typ {
    /// Type constructor applied to arguments.
    Ty(Name, Vec<Typ>),
    /// Type variable with its sort constraint.
    Tv(Var, Sort),
}

impl Typ {
    pub fn con(name: &str, args: Vec<Typ>) -> Typ {
        Typ::Ty(Name::from(name), args)
    }

    pub fn prop() -> Typ {
        Typ::con("prop", vec![])
    }

    pub fn fun(dom: Typ, cod: Typ) -> Typ {
        Typ::con("fun", vec![dom, cod])
    }

    pub fn itself(t: Typ) -> Typ {
        Typ::con("itself", vec![t])
    }

    pub fn tvar(name: &str, sort: Sort) -> Typ {
        Typ::Tv(Var::named(name), sort)
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Typ::Ty(n, args) if n.as_str() == "prop" && args.is_empty())
    }

    /// Splits `dom -> cod`.
    pub fn dest_fun(&self) -> Option<(&Typ, &Typ)> {
        match self {
            Typ::Ty(n, args) if n.as_str() == "fun" && args.len() == 2 => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    /// All `(var, sort)` pairs occurring in the type.
    pub fn tvars(&self) -> BTreeSet<(Var, Sort)> {
        let mut acc = BTreeSet::new();
        self.collect_tvars(&mut acc);
        acc
    }

    fn collect_tvars(&self, acc: &mut BTreeSet<(Var, Sort)>) {
        match self {
            Typ::Ty(_, args) => args.iter().for_each(|a| a.collect_tvars(acc)),
            Typ::Tv(v, s) => {
                acc.insert((v.clone(), s.clone()));
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Typ::Ty(_, args) => 1 + args.iter().map(Typ::depth).max().unwrap_or(0),
            Typ::Tv(..) => 1,
        }
    }
}

impl fmt::Debug for Typ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Typ::Ty(n, args) if args.is_empty() => write!(f, "{n}"),
            Typ::Ty(n, args) if n.as_str() == "fun" && args.len() == 2 => {
                write!(f, "({:?} => {:?})", args[0], args[1])
            }
            Typ::Ty(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a:?}")?;
                }
                write!(f, ")")
            }
            Typ::Tv(v, s) if s.is_empty() => write!(f, "{v:?}"),
            Typ::Tv(v, s) => write!(f, "{v:?}::{s:?}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Ct(Name, Typ),
    Fv(Var, Typ),
    Bv(usize),
    Abs(Typ, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Ct(c, _) => write!(f, "{c}"),
            Term::Fv(v, _) => write!(f, "{v:?}"),
            Term::Bv(i) => write!(f, "#{i}"),
            Term::Abs(t, b) => write!(f, "(\\{t:?}. {b:?})"),
            Term::App(a, b) => write!(f, "({a:?} {b:?})"),
        }
    }
}

impl Term {
    pub fn ct(name: &str, ty: Typ) -> Term {
        Term::Ct(Name::from(name), ty)
    }

    pub fn fv(name: &str, ty: Typ) -> Term {
        Term::Fv(Var::named(name), ty)
    }

    pub fn abs(ty: Typ, body: Term) -> Term {
        Term::Abs(ty, Box::new(body))
    }

    pub fn app(f: Term, x: Term) -> Term {
        Term::App(Box::new(f), Box::new(x))
    }

    /// `f x1 ... xn`
    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Splits an application spine into its head and arguments.
    pub fn strip_comb(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, x) = cur {
            args.push(&**x);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// The type of the term in a context of bound-variable types, where
    /// `ctx[0]` is the type of `Bv 0`. Returns `None` when no typing exists.
    pub fn typ_of(&self, ctx: &[Typ]) -> Option<Typ> {
        // Internally the innermost binder sits at the end of the stack.
        let mut stack: Vec<Typ> = ctx.iter().rev().cloned().collect();
        self.typ_in(&mut stack)
    }

    fn typ_in(&self, stack: &mut Vec<Typ>) -> Option<Typ> {
        match self {
            Term::Ct(_, t) | Term::Fv(_, t) => Some(t.clone()),
            Term::Bv(i) => {
                let len = stack.len();
                if *i < len {
                    Some(stack[len - 1 - i].clone())
                } else {
                    None
                }
            }
            Term::Abs(t, body) => {
                stack.push(t.clone());
                let res = body.typ_in(stack);
                stack.pop();
                Some(Typ::fun(t.clone(), res?))
            }
            Term::App(f, x) => {
                let tf = f.typ_in(stack)?;
                let tx = x.typ_in(stack)?;
                match tf.dest_fun() {
                    Some((dom, cod)) if *dom == tx => Some(cod.clone()),
                    _ => None,
                }
            }
        }
    }

    /// Typing in the empty context.
    pub fn typ(&self) -> Option<Typ> {
        self.typ_of(&[])
    }

    /// All `(var, type)` pairs of free variables in the term.
    pub fn frees(&self) -> BTreeSet<(Var, Typ)> {
        let mut acc = BTreeSet::new();
        self.collect_fv(&mut acc);
        acc
    }

    fn collect_fv(&self, acc: &mut BTreeSet<(Var, Typ)>) {
        match self {
            Term::Fv(v, t) => {
                acc.insert((v.clone(), t.clone()));
            }
            Term::Abs(_, b) => b.collect_fv(acc),
            Term::App(f, x) => {
                f.collect_fv(acc);
                x.collect_fv(acc);
            }
            Term::Ct(..) | Term::Bv(_) => {}
        }
    }

    /// Calls `f` on every type annotation in the term.
    pub fn for_each_typ<F: FnMut(&Typ)>(&self, f: &mut F) {
        match self {
            Term::Ct(_, t) | Term::Fv(_, t) => f(t),
            Term::Bv(_) => {}
            Term::Abs(t, b) => {
                f(t);
                b.for_each_typ(f);
            }
            Term::App(a, b) => {
                a.for_each_typ(f);
                b.for_each_typ(f);
            }
        }
    }

    /// Increments every loose index `>= n`.
    pub fn lift(&self, n: usize) -> Term {
        match self {
            Term::Bv(i) => {
                if n <= *i {
                    Term::Bv(i + 1)
                } else {
                    Term::Bv(*i)
                }
            }
            Term::Abs(t, b) => Term::Abs(t.clone(), Box::new(b.lift(n + 1))),
            Term::App(f, x) => Term::App(Box::new(f.lift(n)), Box::new(x.lift(n))),
            other => other.clone(),
        }
    }

    /// Replaces index `n` by `u`, decrementing the loose indices above `n`.
    pub fn subst_bv2(&self, n: usize, u: &Term) -> Term {
        match self {
            Term::Bv(i) => {
                if *i < n {
                    Term::Bv(*i)
                } else if *i == n {
                    u.clone()
                } else {
                    Term::Bv(i - 1)
                }
            }
            Term::Abs(t, b) => Term::Abs(t.clone(), Box::new(b.subst_bv2(n + 1, &u.lift(0)))),
            Term::App(f, x) => {
                Term::App(Box::new(f.subst_bv2(n, u)), Box::new(x.subst_bv2(n, u)))
            }
            other => other.clone(),
        }
    }

    /// The beta-contractum of `Abs T self` applied to `u`.
    pub fn subst_bv(&self, u: &Term) -> Term {
        self.subst_bv2(0, u)
    }

    /// Replaces `Fv v ty` by the index of a binder to be placed around the term.
    pub fn bind_fv(&self, v: &Var, ty: &Typ) -> Term {
        self.bind_fv2(v, ty, 0)
    }

    fn bind_fv2(&self, v: &Var, ty: &Typ, n: usize) -> Term {
        match self {
            Term::Fv(w, t) => {
                if w == v && t == ty {
                    Term::Bv(n)
                } else {
                    self.clone()
                }
            }
            Term::Abs(t, b) => Term::Abs(t.clone(), Box::new(b.bind_fv2(v, ty, n + 1))),
            Term::App(f, x) => {
                Term::App(Box::new(f.bind_fv2(v, ty, n)), Box::new(x.bind_fv2(v, ty, n)))
            }
            other => other.clone(),
        }
    }

    /// `Abs ty (bind_fv v ty self)`
    pub fn abs_fv(&self, v: &Var, ty: &Typ) -> Term {
        Term::Abs(ty.clone(), Box::new(self.bind_fv(v, ty)))
    }

    /// Whether index `n` (relative to the term's root) occurs loose.
    pub fn has_loose_bv(&self, n: usize) -> bool {
        match self {
            Term::Bv(i) => *i == n,
            Term::Abs(_, b) => b.has_loose_bv(n + 1),
            Term::App(f, x) => f.has_loose_bv(n) || x.has_loose_bv(n),
            _ => false,
        }
    }

    /// Whether any loose index occurs.
    pub fn is_closed(&self) -> bool {
        self.loose_bv_bound(0)
    }

    fn loose_bv_bound(&self, depth: usize) -> bool {
        match self {
            Term::Bv(i) => *i < depth,
            Term::Abs(_, b) => b.loose_bv_bound(depth + 1),
            Term::App(f, x) => f.loose_bv_bound(depth) && x.loose_bv_bound(depth),
            _ => true,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(f, x) => 1 + f.size() + x.size(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Abs(_, b) => 1 + b.depth(),
            Term::App(f, x) => 1 + f.depth().max(x.depth()),
            _ => 1,
        }
    }
}

/// A finite type substitution. Pairs outside the domain map to themselves.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeSubst(BTreeMap<(Var, Sort), Typ>);

impl fmt::Debug for TypeSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl FromIterator<((Var, Sort), Typ)> for TypeSubst {
    fn from_iter<I: IntoIterator<Item = ((Var, Sort), Typ)>>(iter: I) -> Self {
        TypeSubst(iter.into_iter().collect())
    }
}

impl TypeSubst {
    pub fn new() -> TypeSubst {
        TypeSubst::default()
    }

    pub fn singleton(v: Var, s: Sort, t: Typ) -> TypeSubst {
        let mut m = TypeSubst::new();
        m.insert(v, s, t);
        m
    }

    /// Returns the previous binding, if any.
    pub fn insert(&mut self, v: Var, s: Sort, t: Typ) -> Option<Typ> {
        self.0.insert((v, s), t)
    }

    /// The explicit binding for `(v, s)`, if any.
    pub fn binding(&self, v: &Var, s: &Sort) -> Option<&Typ> {
        self.0.get(&(v.clone(), s.clone()))
    }

    /// The total reading: `Tv v s` when unbound.
    pub fn lookup(&self, v: &Var, s: &Sort) -> Typ {
        self.binding(v, s)
            .cloned()
            .unwrap_or_else(|| Typ::Tv(v.clone(), s.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Var, Sort), &Typ)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply_typ(&self, t: &Typ) -> Typ {
        if self.is_empty() {
            return t.clone();
        }
        match t {
            Typ::Ty(n, args) => Typ::Ty(n.clone(), args.iter().map(|a| self.apply_typ(a)).collect()),
            Typ::Tv(v, s) => self.lookup(v, s),
        }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        match t {
            Term::Ct(c, ty) => Term::Ct(c.clone(), self.apply_typ(ty)),
            Term::Fv(v, ty) => Term::Fv(v.clone(), self.apply_typ(ty)),
            Term::Bv(i) => Term::Bv(*i),
            Term::Abs(ty, b) => Term::Abs(self.apply_typ(ty), Box::new(self.apply_term(b))),
            Term::App(f, x) => Term::App(Box::new(self.apply_term(f)), Box::new(self.apply_term(x))),
        }
    }
}

/// Computes a substitution `rho` with `rho(pattern) == instance`, or `None`
/// when `instance` is not an instance of `pattern`. Identity bindings are
/// dropped from the result.
pub fn match_type(instance: &Typ, pattern: &Typ) -> Option<TypeSubst> {
    let mut subst = TypeSubst::new();
    match_into(instance, pattern, &mut subst)?;
    subst.0.retain(|(v, s), t| !matches!(t, Typ::Tv(w, r) if w == v && r == s));
    Some(subst)
}

fn match_into(instance: &Typ, pattern: &Typ, subst: &mut TypeSubst) -> Option<()> {
    match pattern {
        Typ::Tv(v, s) => match subst.binding(v, s) {
            Some(bound) => (bound == instance).then_some(()),
            None => {
                subst.insert(v.clone(), s.clone(), instance.clone());
                Some(())
            }
        },
        Typ::Ty(pn, pargs) => match instance {
            Typ::Ty(n, args) if n == pn && args.len() == pargs.len() => {
                for (a, p) in args.iter().zip(pargs) {
                    match_into(a, p, subst)?;
                }
                Some(())
            }
            _ => None,
        },
    }
}

/// `instance ≲ pattern`
pub fn is_instance(instance: &Typ, pattern: &Typ) -> bool {
    match_type(instance, pattern).is_some()
}
