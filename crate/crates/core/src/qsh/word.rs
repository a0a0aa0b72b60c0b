use std::fmt;

use crate::linear::{Lin, Tensor};

/// A word `a₁…aₙ` of letters; the empty word is the unit of `QSh(A)`.
///
/// Ordering is length first, then lexicographic on letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word<L>(pub Vec<L>);

impl<L: Ord> PartialOrd for Word<L> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Ord> Ord for Word<L> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl<L: Clone> Word<L> {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: L) -> Self {
        Word(vec![l])
    }

    pub fn from_slice(letters: &[L]) -> Self {
        Word(letters.to_vec())
    }

    pub fn prepend(&self, l: L) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(l);
        v.extend(self.0.iter().cloned());
        Word(v)
    }

    pub fn concat(&self, other: &Word<L>) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }
}

impl<L> Word<L> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }
}

impl<L: fmt::Display> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Scalar linear combination of words.
pub type QShElement<L> = Lin<Word<L>>;

/// Linear combination of tensors of words.
pub type TensorElement<L> = Lin<Tensor<Word<L>>>;

/// All words of length `1..=max_len` over `alphabet`, in canonical order.
pub fn words_up_to<L: Clone + Ord>(alphabet: &[L], max_len: usize) -> Vec<Word<L>> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in alphabet {
                let mut v = w.0.clone();
                v.push(l.clone());
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_lexicographic_order() {
        let mut ws = [Word(vec!["b"]),
            Word(vec!["a", "b"]),
            Word(vec![]),
            Word(vec!["a"])];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["1", "a", "b", "a.b"]);
    }

    #[test]
    fn enumerates_all_words() {
        assert_eq!(words_up_to(&['a', 'b'], 3).len(), 2 + 4 + 8);
    }
}
