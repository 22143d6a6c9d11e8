//! Budgeted-search plumbing shared by the subset searches in this crate.

use serde::{Deserialize, Serialize};

/// Result of a budgeted search. `Absent` is only returned when the search
/// space was exhausted; running out of budget yields `Inconclusive`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Absent,
    Inconclusive { steps: u64 },
}

impl<T> SearchOutcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(f(t)),
            SearchOutcome::Absent => SearchOutcome::Absent,
            SearchOutcome::Inconclusive { steps } => SearchOutcome::Inconclusive { steps },
        }
    }
}

/// Step counter with a hard limit. One step is one candidate expansion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Charges one step; false when the budget is exhausted.
    pub fn step(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

/// Iterator over all `k`-subsets of `0..n` in lexicographic order of the
/// sorted tuple.
pub struct LexCombinations {
    n: usize,
    k: usize,
    current: Option<Vec<usize>>,
}

impl LexCombinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        LexCombinations { n, k, current }
    }
}

impl Iterator for LexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let out = cur.clone();
        // Advance: rightmost index that can still move right.
        let mut next = cur;
        let mut i = self.k;
        loop {
            if i == 0 {
                self.current = None;
                return Some(out);
            }
            i -= 1;
            if next[i] + (self.k - i) < self.n {
                next[i] += 1;
                for j in i + 1..self.k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
    }
}

/// Iterator over all `k`-subsets of `0..n` in colexicographic order
/// (sorted tuples compared by their reversal).
pub struct ColexCombinations {
    n: usize,
    k: usize,
    current: Option<Vec<usize>>,
}

impl ColexCombinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        ColexCombinations { n, k, current }
    }
}

impl Iterator for ColexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let out = cur.clone();
        // Advance: smallest position that can move up; reset everything below.
        let mut next = cur;
        for i in 0..self.k {
            let cap = if i + 1 < self.k { next[i + 1] } else { self.n };
            if next[i] + 1 < cap {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        self.current = None;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_combinations_order() {
        let all: Vec<_> = LexCombinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn colex_combinations_order() {
        let all: Vec<_> = ColexCombinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn combinations_degenerate() {
        assert_eq!(LexCombinations::new(3, 0).count(), 1);
        assert_eq!(ColexCombinations::new(3, 0).count(), 1);
        assert_eq!(LexCombinations::new(2, 3).count(), 0);
        assert_eq!(ColexCombinations::new(5, 5).count(), 1);
    }

    #[test]
    fn budget_counts_and_stops() {
        let mut b = Budget::new(2);
        assert!(b.step());
        assert!(b.step());
        assert!(!b.step());
        assert_eq!(b.used(), 2);
        assert!(b.exhausted());
    }
}
