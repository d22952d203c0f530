//! Decorated coordinate labels and canonically ordered index sets.

use std::fmt;
use std::str::FromStr;

use crate::error::IlaError;

/// A coordinate name: base string, a count of primes, and a dot mark.
///
/// Ordering is lexicographic on `(base, primes, dotted)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub base: String,
    pub primes: u32,
    pub dotted: bool,
}

impl Label {
    /// Plain label. Panics if `base` is not a valid label base.
    pub fn new(base: impl Into<String>) -> Self {
        let base = base.into();
        assert!(valid_base(&base), "invalid label base {base:?}");
        Label { base, primes: 0, dotted: false }
    }
    pub fn with(base: impl Into<String>, primes: u32, dotted: bool) -> Self {
        let mut l = Label::new(base);
        l.primes = primes;
        l.dotted = dotted;
        l
    }
    pub fn dot(&self) -> Self {
        Label { dotted: true, ..self.clone() }
    }
    pub fn undot(&self) -> Self {
        Label { dotted: false, ..self.clone() }
    }
    /// Toggle the dot mark: the W <-> Ẇ copy bijection.
    pub fn toggle_dot(&self) -> Self {
        Label { dotted: !self.dotted, ..self.clone() }
    }
    pub fn primed(&self, extra: u32) -> Self {
        Label { primes: self.primes + extra, ..self.clone() }
    }
}

fn valid_base(b: &str) -> bool {
    !b.is_empty() && !b.chars().any(|c| c.is_whitespace() || matches!(c, '\'' | '(' | ')' | ','))
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let core = format!("{}{}", self.base, "'".repeat(self.primes as usize));
        if self.dotted {
            write!(f, "dot({core})")
        } else {
            f.write_str(&core)
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Label {
    type Err = IlaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IlaError::Parse { line: 0, column: 0, msg: format!("bad label {s:?}") };
        let (inner, dotted) = match s.strip_prefix("dot(").and_then(|r| r.strip_suffix(')')) {
            Some(i) => (i, true),
            None => (s, false),
        };
        let base = inner.trim_end_matches('\'');
        let primes = (inner.len() - base.len()) as u32;
        if !valid_base(base) {
            return Err(bad());
        }
        Ok(Label { base: base.to_string(), primes, dotted })
    }
}

/// Shorthand used throughout tests and examples.
pub fn lbl(s: &str) -> Label {
    s.parse().expect("valid label")
}

/// A finite set of labels, kept sorted and duplicate free.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSet {
    labels: Vec<Label>,
}

impl IndexSet {
    pub fn new(mut labels: Vec<Label>) -> Self {
        labels.sort();
        labels.dedup();
        IndexSet { labels }
    }
    /// Build from label strings, e.g. `IndexSet::of(&["a", "b"])`.
    pub fn of(names: &[&str]) -> Self {
        IndexSet::new(names.iter().map(|s| lbl(s)).collect())
    }
    pub fn empty() -> Self {
        IndexSet::default()
    }
    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }
    pub fn iter(&self) -> std::slice::Iter<'_, Label> {
        self.labels.iter()
    }
    pub fn position(&self, l: &Label) -> Option<usize> {
        self.labels.binary_search(l).ok()
    }
    pub fn contains(&self, l: &Label) -> bool {
        self.position(l).is_some()
    }
    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.labels.iter().all(|l| other.contains(l))
    }
    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.labels.iter().all(|l| !other.contains(l))
    }
    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v = self.labels.clone();
        v.extend(other.labels.iter().cloned());
        IndexSet::new(v)
    }
    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet { labels: self.labels.iter().filter(|l| other.contains(l)).cloned().collect() }
    }
    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet { labels: self.labels.iter().filter(|l| !other.contains(l)).cloned().collect() }
    }
    pub fn map(&self, f: impl Fn(&Label) -> Label) -> IndexSet {
        IndexSet::new(self.labels.iter().map(f).collect())
    }
    pub fn dotted(&self) -> IndexSet {
        self.map(Label::dot)
    }
    pub fn undotted(&self) -> IndexSet {
        self.map(Label::undot)
    }
    pub fn max_primes(&self) -> u32 {
        self.labels.iter().map(|l| l.primes).max().unwrap_or(0)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

impl FromIterator<Label> for IndexSet {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        IndexSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = &'a Label;
    type IntoIter = std::slice::Iter<'a, Label>;
    fn into_iter(self) -> Self::IntoIter {
        self.labels.iter()
    }
}
