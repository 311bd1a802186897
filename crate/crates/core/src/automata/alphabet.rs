use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter inside an [`Alphabet`].
pub type Symbol = usize;

/// A finite ordered alphabet.
///
/// Product alphabets remember their factors. A product letter is the tuple of
/// its coordinates, encoded in mixed radix with the first factor most
/// significant, so declaration order is the lexicographic order on tuples.
#[derive(Clone)]
pub struct Alphabet {
    names: Vec<String>,
    factors: Vec<Alphabet>,
    lookup: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::invalid("alphabet must not be empty"));
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(|c: char| c.is_whitespace() || "(),[]\"".contains(c)) {
                return Err(Error::invalid(format!("bad letter name {n:?}")));
            }
            if lookup.insert(n.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate letter {n:?}")));
            }
        }
        Ok(Alphabet { names, factors: Vec::new(), lookup })
    }

    /// Letters named `0`, `1`, ... `n-1`.
    pub fn numeric(n: usize) -> Self {
        Alphabet::new((0..n.max(1)).map(|i| i.to_string())).unwrap()
    }

    /// Alphabet with a single letter, used for parameterless quantifiers.
    pub fn unit() -> Self {
        Alphabet::new(["u"]).unwrap()
    }

    pub fn product(factors: &[Alphabet]) -> Self {
        assert!(!factors.is_empty());
        let mut names = vec![String::new()];
        for f in factors {
            let mut next = Vec::with_capacity(names.len() * f.len());
            for prefix in &names {
                for n in &f.names {
                    if prefix.is_empty() {
                        next.push(n.clone());
                    } else {
                        next.push(format!("{prefix},{n}"));
                    }
                }
            }
            names = next;
        }
        let names: Vec<String> = names.into_iter().map(|n| format!("({n})")).collect();
        let lookup = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        Alphabet { names, factors: factors.to_vec(), lookup }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: Symbol) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        if let Some(&s) = self.lookup.get(name) {
            return Some(s);
        }
        if self.is_product() {
            let parts = split_tuple(name)?;
            if parts.len() != self.factors.len() {
                return None;
            }
            let coords = parts
                .iter()
                .zip(&self.factors)
                .map(|(p, f)| f.symbol(p))
                .collect::<Option<Vec<_>>>()?;
            return Some(self.encode(&coords));
        }
        None
    }

    pub fn is_product(&self) -> bool {
        !self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Alphabet] {
        &self.factors
    }

    /// Factor `i`, treating a non-product alphabet as its own single factor.
    pub fn factor(&self, i: usize) -> &Alphabet {
        if self.is_product() {
            &self.factors[i]
        } else {
            assert_eq!(i, 0);
            self
        }
    }

    pub fn arity(&self) -> usize {
        self.factors.len().max(1)
    }

    pub fn encode(&self, coords: &[Symbol]) -> Symbol {
        if !self.is_product() {
            assert_eq!(coords.len(), 1);
            return coords[0];
        }
        debug_assert_eq!(coords.len(), self.factors.len());
        coords
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, f)| acc * f.len() + c)
    }

    pub fn decode(&self, mut a: Symbol) -> Vec<Symbol> {
        if !self.is_product() {
            return vec![a];
        }
        let mut out = vec![0; self.factors.len()];
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = a % f.len();
            a /= f.len();
        }
        out
    }

    /// The letter of the product of the selected factors.
    pub fn project_symbol(&self, a: Symbol, coords: &[usize]) -> Symbol {
        let full = self.decode(a);
        let sub: Vec<Symbol> = coords.iter().map(|&i| full[i]).collect();
        if coords.len() == 1 {
            sub[0]
        } else {
            self.sub_alphabet(coords).encode(&sub)
        }
    }

    /// Product of the selected factors (the factor itself for a single one).
    pub fn sub_alphabet(&self, coords: &[usize]) -> Alphabet {
        if coords.len() == 1 {
            return self.factor(coords[0]).clone();
        }
        let fs: Vec<Alphabet> = coords.iter().map(|&i| self.factor(i).clone()).collect();
        Alphabet::product(&fs)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.factors == other.factors
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_product() {
            let parts: Vec<String> = self.factors.iter().map(|x| format!("{x:?}")).collect();
            write!(f, "{}", parts.join(" x "))
        } else {
            write!(f, "[{}]", self.names.join(" "))
        }
    }
}

/// Splits `(a,(b,c),d)` into its top-level components.
pub(crate) fn split_tuple(s: &str) -> Option<Vec<&str>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&inner[start..]);
    Some(parts)
}

impl Alphabet {
    /// Letterwise tuple of words over the factors of this product alphabet.
    pub fn tuple_word(&self, parts: &[&super::word::UpWord<Symbol>]) -> super::word::UpWord<Symbol> {
        assert_eq!(parts.len(), self.arity());
        let p = parts.iter().map(|w| w.prefix().len()).max().unwrap();
        let l = parts.iter().fold(1, |acc, w| super::word::lcm(acc, w.period().len()));
        let letter = |n: usize| {
            let coords: Vec<Symbol> = parts.iter().map(|w| *w.at(n)).collect();
            self.encode(&coords)
        };
        super::word::UpWord::new((0..p).map(letter).collect(), (p..p + l).map(letter).collect()).unwrap()
    }

    /// Coordinate `i` of a word over this product alphabet.
    pub fn component_word(&self, w: &super::word::UpWord<Symbol>, i: usize) -> super::word::UpWord<Symbol> {
        w.map(|&a| self.decode(a)[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_order_is_lexicographic() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let bits = Alphabet::numeric(2);
        let p = Alphabet::product(&[ab, bits]);
        let names: Vec<&str> = p.names().iter().map(String::as_str).collect();
        assert_eq!(names, ["(a,0)", "(a,1)", "(b,0)", "(b,1)"]);
        assert_eq!(p.decode(2), vec![1, 0]);
        assert_eq!(p.encode(&[1, 1]), 3);
        assert_eq!(p.symbol("(b,1)"), Some(3));
    }

    #[test]
    fn nested_tuples_resolve() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let inner = Alphabet::product(&[ab.clone(), ab.clone()]);
        let outer = Alphabet::product(&[inner, Alphabet::numeric(3)]);
        let s = outer.symbol("((b,a),2)").unwrap();
        assert_eq!(outer.name(s), "((b,a),2)");
        assert_eq!(outer.decode(s), vec![2, 2]);
    }

    #[test]
    fn rejects_duplicates() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }
}
