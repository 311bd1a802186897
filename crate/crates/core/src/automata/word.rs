use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// An ultimately periodic word `u v^ω`.
///
/// The raw prefix and period are kept as given; equality and hashing go
/// through the canonical form (primitive period, then shortest prefix).
#[derive(Clone, Debug)]
pub struct UpWord<T> {
    prefix: Vec<T>,
    period: Vec<T>,
}

impl<T: Clone + Eq> UpWord<T> {
    pub fn new(prefix: Vec<T>, period: Vec<T>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::invalid("period of an ultimately periodic word is empty"));
        }
        Ok(UpWord { prefix, period })
    }

    pub fn periodic(period: Vec<T>) -> Result<Self> {
        UpWord::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    /// Number of lasso positions: prefix length plus period length.
    pub fn lasso_len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Letter at absolute position `n`.
    pub fn at(&self, n: usize) -> &T {
        match self.prefix.get(n) {
            Some(a) => a,
            None => &self.period[(n - self.prefix.len()) % self.period.len()],
        }
    }

    /// Lasso position holding the letter at absolute position `n`.
    pub fn lasso_pos(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            n
        } else {
            self.prefix.len() + (n - self.prefix.len()) % self.period.len()
        }
    }

    /// Successor of a lasso position, wrapping from the end of the period.
    pub fn next_pos(&self, i: usize) -> usize {
        if i + 1 < self.lasso_len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// Letter at a lasso position.
    pub fn lasso_letter(&self, i: usize) -> &T {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[i - self.prefix.len()]
        }
    }

    pub fn take(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.at(i).clone()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.prefix.iter().chain(self.period.iter().cycle())
    }

    pub fn map<U: Clone + Eq>(&self, mut f: impl FnMut(&T) -> U) -> UpWord<U> {
        UpWord {
            prefix: self.prefix.iter().map(&mut f).collect(),
            period: self.period.iter().map(&mut f).collect(),
        }
    }

    /// The word `w_n w_{n+1} ...`.
    pub fn suffix(&self, n: usize) -> UpWord<T> {
        if n < self.prefix.len() {
            UpWord {
                prefix: self.prefix[n..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let k = (n - self.prefix.len()) % self.period.len();
            let mut period = self.period[k..].to_vec();
            period.extend_from_slice(&self.period[..k]);
            UpWord { prefix: Vec::new(), period }
        }
    }

    /// Same word with the period repeated `times` times.
    pub fn unroll(&self, times: usize) -> UpWord<T> {
        let times = times.max(1);
        UpWord {
            prefix: self.prefix.clone(),
            period: self.period.iter().cycle().take(self.period.len() * times).cloned().collect(),
        }
    }

    /// Same word with `extra` letters moved from the period into the prefix.
    pub fn shift_prefix(&self, extra: usize) -> UpWord<T> {
        let n = self.prefix.len() + extra;
        UpWord {
            prefix: self.take(n),
            period: self.suffix(n).period,
        }
    }

    /// Letterwise pairing over a common lasso.
    pub fn zip<U: Clone + Eq>(&self, other: &UpWord<U>) -> UpWord<(T, U)> {
        let p = self.prefix.len().max(other.prefix.len());
        let l = lcm(self.period.len(), other.period.len());
        let pair = |n: usize| (self.at(n).clone(), other.at(n).clone());
        UpWord {
            prefix: (0..p).map(pair).collect(),
            period: (p..p + l).map(pair).collect(),
        }
    }

    /// Primitive period, then the shortest prefix.
    pub fn canonical(&self) -> UpWord<T> {
        let n = self.period.len();
        let root = (1..=n)
            .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i - d]))
            .unwrap_or(n);
        let mut period: Vec<T> = self.period[..root].to_vec();
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if *last != period[root - 1] {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        UpWord { prefix, period }
    }
}

impl<T: Clone + Eq> PartialEq for UpWord<T> {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.prefix == b.prefix && a.period == b.period
    }
}

impl<T: Clone + Eq> Eq for UpWord<T> {}

impl<T: Clone + Eq + Hash> Hash for UpWord<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let c = self.canonical();
        c.prefix.hash(state);
        c.period.hash(state);
    }
}

impl<T: fmt::Display> fmt::Display for UpWord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.prefix {
            write!(f, "{a} ")?;
        }
        write!(f, "(")?;
        for (i, a) in self.period.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// All ultimately periodic words over `0..k` whose lasso has at most
/// `max_lasso` positions, one per canonical form.
pub fn enumerate_up_words(k: usize, max_lasso: usize) -> Vec<UpWord<usize>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for total in 1..=max_lasso {
        for plen in 0..total {
            for code in 0..k.pow(total as u32) {
                let mut letters = Vec::with_capacity(total);
                let mut c = code;
                for _ in 0..total {
                    letters.push(c % k);
                    c /= k;
                }
                letters.reverse();
                let period = letters.split_off(plen);
                let w = UpWord { prefix: letters, period };
                let canon = w.canonical();
                if seen.insert((canon.prefix.clone(), canon.period.clone())) {
                    out.push(canon);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(prefix: &str, period: &str) -> UpWord<char> {
        UpWord::new(prefix.chars().collect(), period.chars().collect()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let c = w("a", "aa").canonical();
        assert_eq!((c.prefix(), c.period()), (&[][..], &['a'][..]));
        let c = w("", "abab").canonical();
        assert_eq!(c.period(), &['a', 'b']);
        let c = w("ab", "ba").canonical();
        assert_eq!((c.prefix(), c.period()), (&['a', 'b'][..], &['b', 'a'][..]));
        let c = w("xab", "cab").canonical();
        assert_eq!((c.prefix(), c.period()), (&['x'][..], &['a', 'b', 'c'][..]));
    }

    #[test]
    fn rejects_empty_period() {
        assert!(UpWord::<char>::new(vec!['a'], vec![]).is_err());
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let all = enumerate_up_words(2, 4);
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.contains(&w("", "a").map(|_| 0usize)));
    }

    fn arb_word() -> impl Strategy<Value = UpWord<u8>> {
        (prop::collection::vec(0u8..3, 0..5), prop::collection::vec(0u8..3, 1..5))
            .prop_map(|(u, v)| UpWord::new(u, v).unwrap())
    }

    proptest! {
        #[test]
        fn canonical_denotes_same_word(x in arb_word()) {
            let c = x.canonical();
            prop_assert_eq!(x.take(40), c.take(40));
            prop_assert!(c.lasso_len() <= x.lasso_len());
        }

        #[test]
        fn equality_matches_letters(x in arb_word(), y in arb_word()) {
            // two lassos of length < 5 agreeing on 20 letters denote the same word
            prop_assert_eq!(x == y, x.take(20) == y.take(20));
        }

        #[test]
        fn unroll_and_shift_preserve_word(x in arb_word(), k in 1usize..4, s in 0usize..4) {
            prop_assert_eq!(&x.unroll(k), &x);
            prop_assert_eq!(&x.shift_prefix(s), &x);
            prop_assert_eq!(x.suffix(s).take(10), x.take(s + 10)[s..].to_vec());
        }

        #[test]
        fn zip_is_letterwise(x in arb_word(), y in arb_word()) {
            let z = x.zip(&y);
            for n in 0..20 {
                prop_assert_eq!(z.at(n), &(*x.at(n), *y.at(n)));
            }
        }
    }
}
