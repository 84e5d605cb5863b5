use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex, Weak};

/// Interned-ish identifier used for predicates, constants, variables and rule ids.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// A first-order term: a constant, a rule variable, or a labelled null.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Constant(Name),
    Variable(Name),
    Null(Arc<Null>),
}

/// Provenance of a labelled null.
///
/// Nulls are never minted from counters: a null is a pure function of where it
/// came from, so replaying the same trigger always yields the same term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Null {
    /// A null present in the initial factbase, e.g. `_:w`.
    Initial(Name),
    /// A null introduced by the safe extension of a trigger.
    Fresh(FreshNull),
}

/// A null named after the trigger (or frontier) that introduced it.
///
/// Keys nest earlier nulls, so names can grow exponentially with the
/// derivation depth. Fresh nulls are hash-consed: structurally equal nulls
/// share one allocation, hashing uses a digest computed at construction,
/// and comparisons stop at shared subterms, so only printing pays for the
/// full name.
#[derive(Clone)]
pub struct FreshNull {
    rule: Name,
    key: NullKey,
    exvar: Name,
    digest: u64,
    depth: usize,
    display_len: usize,
}

impl FreshNull {
    pub fn rule(&self) -> &Name {
        &self.rule
    }

    pub fn key(&self) -> &NullKey {
        &self.key
    }

    pub fn exvar(&self) -> &Name {
        &self.exvar
    }
}

impl PartialEq for FreshNull {
    fn eq(&self, other: &FreshNull) -> bool {
        self.digest == other.digest
            && self.depth == other.depth
            && self.rule == other.rule
            && self.exvar == other.exvar
            && self.key == other.key
    }
}

impl Eq for FreshNull {}

impl Hash for FreshNull {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.digest);
    }
}

impl Ord for FreshNull {
    fn cmp(&self, other: &FreshNull) -> Ordering {
        self.rule
            .cmp(&other.rule)
            .then_with(|| self.exvar.cmp(&other.exvar))
            .then_with(|| self.key.cmp(&other.key))
    }
}

impl PartialOrd for FreshNull {
    fn partial_cmp(&self, other: &FreshNull) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        fn tag(t: &Term) -> u8 {
            match t {
                Term::Constant(_) => 0,
                Term::Variable(_) => 1,
                Term::Null(_) => 2,
            }
        }
        match (self, other) {
            (Term::Constant(a), Term::Constant(b)) | (Term::Variable(a), Term::Variable(b)) => a.cmp(b),
            (Term::Null(a), Term::Null(b)) if Arc::ptr_eq(a, b) => Ordering::Equal,
            (Term::Null(a), Term::Null(b)) => a.cmp(b),
            _ => tag(self).cmp(&tag(other)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// What a fresh null is keyed on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NullKey {
    /// The full body substitution, ordered by variable name.
    Trigger(Vec<(Name, Term)>),
    /// The images of the frontier variables, in the rule's frontier order.
    Frontier(Vec<Term>),
}

struct Interner {
    by_digest: HashMap<u64, Vec<Weak<Null>>>,
    live_after_prune: usize,
}

static FRESH_NULLS: LazyLock<Mutex<Interner>> = LazyLock::new(|| {
    Mutex::new(Interner {
        by_digest: HashMap::new(),
        live_after_prune: 0,
    })
});

/// Returns the shared allocation for `fresh`, creating it if needed. Dead
/// entries are pruned whenever the table has doubled since the last prune.
fn intern(fresh: FreshNull) -> Term {
    let mut table = FRESH_NULLS.lock().unwrap_or_else(|e| e.into_inner());
    let bucket = table.by_digest.entry(fresh.digest).or_default();
    for weak in bucket.iter() {
        if let Some(existing) = weak.upgrade() {
            if matches!(existing.as_ref(), Null::Fresh(f) if *f == fresh) {
                return Term::Null(existing);
            }
        }
    }
    let null = Arc::new(Null::Fresh(fresh));
    bucket.push(Arc::downgrade(&null));
    if table.by_digest.len() > 2 * table.live_after_prune.max(1024) {
        table.by_digest.retain(|_, bucket| {
            bucket.retain(|w| w.strong_count() > 0);
            !bucket.is_empty()
        });
        table.live_after_prune = table.by_digest.len();
    }
    Term::Null(null)
}

impl Term {
    pub fn constant(s: &str) -> Term {
        Term::Constant(name(s))
    }

    pub fn variable(s: &str) -> Term {
        Term::Variable(name(s))
    }

    pub fn initial_null(s: &str) -> Term {
        Term::Null(Arc::new(Null::Initial(name(s))))
    }

    pub fn fresh_null(rule: Name, key: NullKey, exvar: Name) -> Term {
        let inner = match &key {
            NullKey::Trigger(pairs) => pairs.iter().map(|(_, t)| t.null_depth()).max(),
            NullKey::Frontier(terms) => terms.iter().map(Term::null_depth).max(),
        };
        let key_len = match &key {
            NullKey::Trigger(pairs) => pairs.iter().fold(1 + pairs.len(), |n, (v, t)| {
                n.saturating_add(v.len() + 1).saturating_add(t.display_len())
            }),
            NullKey::Frontier(terms) => terms
                .iter()
                .fold(1 + terms.len(), |n, t| n.saturating_add(t.display_len())),
        };
        let display_len = key_len.saturating_add(4 + rule.len() + exvar.len());
        let mut hasher = DefaultHasher::new();
        rule.hash(&mut hasher);
        key.hash(&mut hasher);
        exvar.hash(&mut hasher);
        intern(FreshNull {
            rule,
            key,
            exvar,
            digest: hasher.finish(),
            depth: 1 + inner.unwrap_or(0),
            display_len,
        })
    }

    /// Length of the printed form, computed without printing. Saturates at
    /// `usize::MAX` for very deeply nested nulls.
    pub fn display_len(&self) -> usize {
        match self {
            Term::Constant(c) if is_plain_constant(c) => c.len(),
            Term::Constant(c) => 2 + c.len() + c.chars().filter(|ch| *ch == '"' || *ch == '\\').count(),
            Term::Variable(v) if is_plain_variable(v) => v.len(),
            Term::Variable(v) => 1 + v.len(),
            Term::Null(null) => match null.as_ref() {
                Null::Initial(n) => 2 + n.len(),
                Null::Fresh(fresh) => fresh.display_len,
            },
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::Constant(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Term::Null(_))
    }

    /// Nesting depth of null provenance; constants and variables are 0.
    pub fn null_depth(&self) -> usize {
        match self {
            Term::Null(null) => match null.as_ref() {
                Null::Initial(_) => 1,
                Null::Fresh(fresh) => fresh.depth,
            },
            _ => 0,
        }
    }
}

pub(crate) fn is_plain_constant(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_plain_variable(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(c) if is_plain_constant(c) => write!(f, "{c}"),
            Term::Constant(c) => {
                write!(f, "\"")?;
                for ch in c.chars() {
                    if ch == '"' || ch == '\\' {
                        write!(f, "\\")?;
                    }
                    write!(f, "{ch}")?;
                }
                write!(f, "\"")
            }
            Term::Variable(v) if is_plain_variable(v) => write!(f, "{v}"),
            Term::Variable(v) => write!(f, "?{v}"),
            Term::Null(null) => write!(f, "{null}"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Null {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Null::Initial(n) => write!(f, "_:{n}"),
            Null::Fresh(FreshNull { rule, key, exvar, .. }) => {
                write!(f, "_:{rule}#")?;
                match key {
                    NullKey::Trigger(pairs) => {
                        write!(f, "{{")?;
                        for (i, (var, term)) in pairs.iter().enumerate() {
                            if i > 0 {
                                write!(f, ",")?;
                            }
                            write!(f, "{var}:{term}")?;
                        }
                        write!(f, "}}")?;
                    }
                    NullKey::Frontier(terms) => {
                        write!(f, "[")?;
                        for (i, term) in terms.iter().enumerate() {
                            if i > 0 {
                                write!(f, ",")?;
                            }
                            write!(f, "{term}")?;
                        }
                        write!(f, "]")?;
                    }
                }
                write!(f, "#{exvar}")
            }
        }
    }
}
