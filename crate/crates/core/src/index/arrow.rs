use std::fmt;

use super::Index;
use crate::error::{Error, Result};

/// The arrow operations on indices. Repeated raises and lowers carry their count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrowOp {
    /// `k_→`
    RightAppend,
    /// `←k`
    LeftPrepend,
    /// `k_{↑^j}`
    UpLast(u32),
    /// `_{↑^j}k`
    UpFirst(u32),
    /// `k_{↓^j}`
    DownLast(u32),
    /// `_{↓^j}k`
    DownFirst(u32),
}

impl ArrowOp {
    pub fn apply(self, k: &Index) -> Result<Index> {
        match self {
            ArrowOp::RightAppend => Ok(k.append_one()),
            ArrowOp::LeftPrepend => Ok(k.prepend_one()),
            ArrowOp::UpLast(j) => Ok(k.raise_last_by(j)),
            ArrowOp::UpFirst(j) => Ok(k.raise_first_by(j)),
            ArrowOp::DownLast(j) => k.lower_last_by(j),
            ArrowOp::DownFirst(j) => k.lower_first_by(j),
        }
    }

    /// Applies `ops` left to right.
    pub fn apply_all(k: &Index, ops: &[ArrowOp]) -> Result<Index> {
        ops.iter().try_fold(k.clone(), |acc, op| op.apply(&acc))
    }
}

impl fmt::Display for ArrowOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sym, j) = match *self {
            ArrowOp::RightAppend => return f.write_str("_→"),
            ArrowOp::LeftPrepend => return f.write_str("←"),
            ArrowOp::UpLast(j) => ("_↑", j),
            ArrowOp::UpFirst(j) => ("↑", j),
            ArrowOp::DownLast(j) => ("_↓", j),
            ArrowOp::DownFirst(j) => ("↓", j),
        };
        if j == 1 {
            f.write_str(sym)
        } else {
            write!(f, "{sym}^{j}")
        }
    }
}

/// A letter of the spelling of an index from `∅`: `→` appends a 1, `↑` raises the last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Right,
    Up,
}

impl Arrow {
    pub fn swapped(self) -> Arrow {
        match self {
            Arrow::Right => Arrow::Up,
            Arrow::Up => Arrow::Right,
        }
    }
}

/// A word over `{→, ↑}`. `(3,2)` is spelled `→↑↑→↑`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ArrowWord(Vec<Arrow>);

impl ArrowWord {
    pub fn new(letters: Vec<Arrow>) -> Result<Self> {
        if letters.first() == Some(&Arrow::Up) {
            return Err(Error::domain("a nonempty arrow word must begin with →"));
        }
        Ok(ArrowWord(letters))
    }

    pub fn encode(k: &Index) -> ArrowWord {
        let mut letters = Vec::with_capacity(k.weight() as usize);
        for &e in k.entries() {
            letters.push(Arrow::Right);
            letters.extend(std::iter::repeat_n(Arrow::Up, e as usize - 1));
        }
        ArrowWord(letters)
    }

    pub fn decode(&self) -> Index {
        let mut entries: Vec<u32> = Vec::new();
        for a in &self.0 {
            match a {
                Arrow::Right => entries.push(1),
                Arrow::Up => *entries.last_mut().expect("word begins with →") += 1,
            }
        }
        Index(entries)
    }

    pub fn letters(&self) -> &[Arrow] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff the decoded index is admissible.
    pub fn is_admissible(&self) -> bool {
        self.0.last() == Some(&Arrow::Up)
    }

    /// Reverse the word and exchange `→` with `↑`. Maps admissible words to admissible words.
    pub fn reverse_swap(&self) -> ArrowWord {
        ArrowWord(self.0.iter().rev().map(|a| a.swapped()).collect())
    }
}

impl fmt::Display for ArrowWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            f.write_str(match a {
                Arrow::Right => "→",
                Arrow::Up => "↑",
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ind;

    #[test]
    fn empty_conventions() {
        let e = Index::empty();
        assert_eq!(e.append_one(), ind!(1));
        assert_eq!(e.prepend_one(), ind!(1));
        assert_eq!(e.raise_last(), e);
        assert_eq!(e.raise_first(), e);
        assert_eq!(e.lower_last().unwrap(), e);
        assert_eq!(e.lower_first().unwrap(), e);
    }

    #[test]
    fn examples() {
        assert_eq!(ArrowOp::RightAppend.apply(&Index::empty()).unwrap(), ind!(1));
        assert_eq!(ArrowOp::UpLast(1).apply(&ind!(1)).unwrap(), ind!(2));
        let word = [
            ArrowOp::RightAppend,
            ArrowOp::UpLast(1),
            ArrowOp::UpLast(1),
            ArrowOp::RightAppend,
            ArrowOp::UpLast(1),
        ];
        assert_eq!(ArrowOp::apply_all(&Index::empty(), &word).unwrap(), ind!(3, 2));
    }

    #[test]
    fn lowering_a_one_is_an_error() {
        assert!(matches!(ind!(2, 1).lower_last(), Err(Error::InapplicableArrow { .. })));
        assert!(matches!(ind!(1, 2).lower_first(), Err(Error::InapplicableArrow { .. })));
        assert_eq!(ind!(1, 3).apply(ArrowOp::DownLast(2)).unwrap(), ind!(1, 1));
    }

    #[test]
    fn word_spelling() {
        let w = ArrowWord::encode(&ind!(3, 2));
        assert_eq!(w.to_string(), "→↑↑→↑");
        assert!(w.is_admissible());
        assert_eq!(w.decode(), ind!(3, 2));
        assert!(ArrowWord::new(vec![Arrow::Up]).is_err());
    }

    #[test]
    fn arrow_round_trips_up_to_weight_8() {
        for k in Index::all_up_to_weight(8) {
            assert_eq!(ArrowWord::encode(&k).decode(), k);
            if !k.is_empty() {
                assert_eq!(k.raise_last().lower_last().unwrap(), k);
                assert_eq!(k.raise_first().lower_first().unwrap(), k);
            }
            let appended = k.append_one();
            assert_eq!(appended.last(), Some(1));
            assert_eq!(appended.strip_last_one().unwrap(), k);
            assert_eq!(k.prepend_one().strip_first_one().unwrap(), k);
            assert_eq!(ArrowWord::encode(&k).is_admissible(), k.is_admissible());
        }
    }
}
