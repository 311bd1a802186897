use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite Wilke algebra given by its tables.
///
/// Elements of `S₊` and `S_ω` are indices into the respective carriers. The
/// monoid `S₊¹` is modelled as `Option<usize>` with `None` the adjoined
/// neutral element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WilkeAlgebra {
    fin_names: Vec<String>,
    inf_names: Vec<String>,
    mul: Vec<usize>,
    mixed: Vec<usize>,
    omega: Vec<usize>,
}

impl WilkeAlgebra {
    /// Tables are row-major: `mul[s * |S₊| + s']`, `mixed[s * |S_ω| + t]`.
    pub fn new(
        fin_names: Vec<String>,
        inf_names: Vec<String>,
        mul: Vec<usize>,
        mixed: Vec<usize>,
        omega: Vec<usize>,
    ) -> Result<Self> {
        let (n, m) = (fin_names.len(), inf_names.len());
        if n == 0 || m == 0 {
            return Err(Error::invalid("both carriers must be non-empty"));
        }
        if mul.len() != n * n || mixed.len() != n * m || omega.len() != n {
            return Err(Error::invalid("table sizes do not match the carriers"));
        }
        if mul.iter().any(|&x| x >= n) || mixed.iter().chain(&omega).any(|&x| x >= m) {
            return Err(Error::invalid("table entry outside its carrier"));
        }
        Ok(WilkeAlgebra { fin_names, inf_names, mul, mixed, omega })
    }

    /// The algebra with one element of each sort.
    pub fn trivial() -> Self {
        WilkeAlgebra::new(vec!["s0".into()], vec!["o0".into()], vec![0], vec![0], vec![0]).unwrap()
    }

    /// The cyclic group `Z_n` with a single ω-element.
    pub fn cyclic_group(n: usize) -> Self {
        let mul = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        WilkeAlgebra::new(
            (0..n).map(|i| format!("g{i}")).collect(),
            vec!["o0".into()],
            mul,
            vec![0; n],
            vec![0; n],
        )
        .unwrap()
    }

    pub fn fin_len(&self) -> usize {
        self.fin_names.len()
    }

    pub fn inf_len(&self) -> usize {
        self.inf_names.len()
    }

    pub fn fin_name(&self, s: usize) -> &str {
        &self.fin_names[s]
    }

    pub fn inf_name(&self, t: usize) -> &str {
        &self.inf_names[t]
    }

    pub fn fin_names(&self) -> &[String] {
        &self.fin_names
    }

    pub fn inf_names(&self) -> &[String] {
        &self.inf_names
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.fin_len() + b]
    }

    /// Product in `S₊¹`.
    pub fn mul1(&self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(self.mul(a, b)),
        }
    }

    pub fn mixed(&self, s: usize, t: usize) -> usize {
        self.mixed[s * self.inf_len() + t]
    }

    pub fn mixed1(&self, s: Option<usize>, t: usize) -> usize {
        s.map_or(t, |s| self.mixed(s, t))
    }

    pub fn omega(&self, s: usize) -> usize {
        self.omega[s]
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a usize>) -> Option<usize> {
        items.into_iter().fold(None, |acc, &s| self.mul1(acc, Some(s)))
    }

    pub fn pow(&self, s: usize, n: usize) -> usize {
        assert!(n >= 1);
        (1..n).fold(s, |acc, _| self.mul(acc, s))
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.fin_len()).filter(|&s| self.is_idempotent(s)).collect()
    }

    /// Least idempotent `e` (by index) with `c·e = c`.
    pub fn stabilizing_idempotent(&self, c: usize) -> Option<usize> {
        (0..self.fin_len()).find(|&e| self.is_idempotent(e) && self.mul(c, e) == c)
    }

    /// Overwrites one product entry; used to exercise the axiom checker.
    pub fn set_mul(&mut self, a: usize, b: usize, v: usize) {
        let n = self.fin_len();
        self.mul[a * n + b] = v;
    }
}

/// Violations found by [`check_wilke_axioms`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks associativity, mixed associativity and the two ω-power
/// axioms (the latter for exponents up to `|S₊| + 1`).
pub fn check_wilke_axioms(s: &WilkeAlgebra) -> AxiomReport {
    let mut v = Vec::new();
    let (n, m) = (s.fin_len(), s.inf_len());
    for a in 0..n {
        for b in 0..n {
            let ab = s.mul(a, b);
            for c in 0..n {
                if s.mul(ab, c) != s.mul(a, s.mul(b, c)) {
                    v.push(format!("associativity fails at ({}, {}, {})", s.fin_name(a), s.fin_name(b), s.fin_name(c)));
                }
            }
            for t in 0..m {
                if s.mixed(ab, t) != s.mixed(a, s.mixed(b, t)) {
                    v.push(format!(
                        "mixed associativity fails at ({}, {}, {})",
                        s.fin_name(a),
                        s.fin_name(b),
                        s.inf_name(t)
                    ));
                }
            }
            if s.omega(ab) != s.mixed(a, s.omega(s.mul(b, a))) {
                v.push(format!("(st)^ω ≠ s(ts)^ω at ({}, {})", s.fin_name(a), s.fin_name(b)));
            }
        }
        let mut p = a;
        for k in 1..=n + 1 {
            if s.omega(p) != s.omega(a) {
                v.push(format!("(s^{k})^ω ≠ s^ω at {}", s.fin_name(a)));
            }
            p = s.mul(p, a);
        }
    }
    AxiomReport { violations: v }
}

/// Least `n ≥ 1` with `sⁿ` idempotent, together with `sⁿ`.
pub fn idempotent_power(s: &WilkeAlgebra, x: usize) -> (usize, usize) {
    let mut p = x;
    let mut n = 1;
    while !s.is_idempotent(p) {
        p = s.mul(p, x);
        n += 1;
    }
    (n, p)
}

/// The recursive bound `R(1) = 3`, `R(c) = c·(R(c−1) − 1) + 2` on the
/// triangle Ramsey number with `|S₊|` colours; saturates at `usize::MAX`.
pub fn ramsey_bound(s: &WilkeAlgebra) -> usize {
    ramsey_recursion(s.fin_len())
}

pub fn ramsey_recursion(colours: usize) -> usize {
    let mut r: usize = 3;
    for c in 2..=colours.max(1) {
        r = c.saturating_mul(r - 1).saturating_add(2);
    }
    r
}

const RAMSEY_SEARCH_LIMIT: usize = 1 << 20;

/// The least `r` such that every word `s₀ … s_{r−1}` over `S₊` has positions
/// `i < j` with `s_{i+1} ⋯ s_j` idempotent. Computed by a longest-path search
/// over sets of suffix products; falls back to [`ramsey_bound`] if the search
/// space is too large.
pub fn ramsey_constant(s: &WilkeAlgebra) -> usize {
    let n = s.fin_len();
    let words = n.div_ceil(64);
    let mut memo: HashMap<Vec<u64>, usize> = HashMap::new();

    fn longest(
        s: &WilkeAlgebra,
        set: &[u64],
        memo: &mut HashMap<Vec<u64>, usize>,
        words: usize,
    ) -> Option<usize> {
        if let Some(&v) = memo.get(set) {
            return Some(v);
        }
        if memo.len() > RAMSEY_SEARCH_LIMIT {
            return None;
        }
        let members: Vec<usize> = (0..s.fin_len()).filter(|&p| set[p / 64] >> (p % 64) & 1 == 1).collect();
        let mut best = 0;
        'letters: for a in 0..s.fin_len() {
            let mut next = vec![0u64; words];
            for q in members.iter().map(|&p| s.mul(p, a)).chain([a]) {
                if s.is_idempotent(q) {
                    continue 'letters;
                }
                next[q / 64] |= 1 << (q % 64);
            }
            best = best.max(1 + longest(s, &next, memo, words)?);
        }
        memo.insert(set.to_vec(), best);
        Some(best)
    }

    match longest(s, &vec![0u64; words], &mut memo, words) {
        Some(l) => l + 2,
        None => ramsey_bound(s),
    }
}

/// Whether `word` has positions `i < j` with `word[i+1..=j]` idempotent.
pub fn has_idempotent_infix(s: &WilkeAlgebra, word: &[usize]) -> bool {
    (1..word.len()).any(|i| {
        let mut p = word[i];
        if s.is_idempotent(p) {
            return true;
        }
        word[i + 1..].iter().any(|&x| {
            p = s.mul(p, x);
            s.is_idempotent(p)
        })
    })
}
