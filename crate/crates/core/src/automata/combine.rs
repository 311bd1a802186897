//! Boolean combinations of deterministic parity automata.
//!
//! The product of the components emits, at every step, the tuple of component
//! priorities. Acceptance is then a Muller condition on the set of tuples seen
//! infinitely often, which is turned into a parity condition either with the
//! Zielonka tree of that condition or with a latest appearance record.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::automaton::{State, WordAutomaton};
use super::index::{ParityIndex, Priority};
use super::reduce::{normalize_priorities, reduce};
use crate::error::{Error, Result};

/// A Boolean function given by its truth table. Bit `i` of a row index is
/// the value of argument `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct BoolFn {
    arity: usize,
    table: Vec<bool>,
}

impl BoolFn {
    pub fn new(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let table = (0..1usize << arity)
            .map(|row| {
                let args: Vec<bool> = (0..arity).map(|i| row >> i & 1 == 1).collect();
                f(&args)
            })
            .collect();
        BoolFn { arity, table }
    }

    /// Parses a string of `0`/`1` of length `2^arity`, row 0 first.
    pub fn from_table(bits: &str) -> Result<Self> {
        let table: Vec<bool> = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::invalid(format!("bad truth table character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        let arity = table.len().trailing_zeros() as usize;
        if table.is_empty() || 1 << arity != table.len() {
            return Err(Error::invalid("truth table length must be a power of two"));
        }
        Ok(BoolFn { arity, table })
    }

    pub fn and(arity: usize) -> Self {
        BoolFn::new(arity, |v| v.iter().all(|&b| b))
    }

    pub fn or(arity: usize) -> Self {
        BoolFn::new(arity, |v| v.iter().any(|&b| b))
    }

    pub fn xor() -> Self {
        BoolFn::new(2, |v| v[0] != v[1])
    }

    pub fn xnor() -> Self {
        BoolFn::new(2, |v| v[0] == v[1])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[bool]) -> bool {
        let row = args.iter().enumerate().fold(0, |r, (i, &b)| r | (b as usize) << i);
        self.table[row]
    }

    pub fn table_string(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for BoolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolFn({})", self.table_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMethod {
    ZielonkaTree,
    LatestAppearanceRecord,
}

/// Automaton accepting `w` iff `f(w ∈ L(D_1), ..., w ∈ L(D_n))`.
pub fn combine_dpas(ds: &[WordAutomaton], f: &BoolFn) -> Result<WordAutomaton> {
    combine_dpas_with(ds, f, CombineMethod::ZielonkaTree)
}

pub fn combine_dpas_with(ds: &[WordAutomaton], f: &BoolFn, method: CombineMethod) -> Result<WordAutomaton> {
    if ds.is_empty() || f.arity() != ds.len() {
        return Err(Error::invalid("combination arity does not match the number of automata"));
    }
    let alphabet = ds[0].alphabet().clone();
    if ds.iter().any(|d| *d.alphabet() != alphabet) {
        return Err(Error::mismatch("combined automata must share their alphabet"));
    }
    if ds.iter().any(|d| !d.is_deterministic()) {
        return Err(Error::NotDeterministic);
    }
    let ds: Vec<WordAutomaton> = ds.iter().map(normalize_priorities).collect();
    let letters = alphabet.len();

    // product of the components with the priority tuple of each step
    let mut tuples: HashMap<Vec<State>, usize> = HashMap::new();
    let mut states: Vec<Vec<State>> = Vec::new();
    let mut colors: HashMap<Vec<Priority>, usize> = HashMap::new();
    let mut color_list: Vec<Vec<Priority>> = Vec::new();
    let mut prod: Vec<(usize, usize)> = Vec::new();
    let start: Vec<State> = ds.iter().map(|d| d.initial()[0]).collect();
    tuples.insert(start.clone(), 0);
    states.push(start);
    let mut i = 0;
    while i < states.len() {
        for x in 0..letters {
            let mut next = Vec::with_capacity(ds.len());
            let mut col = Vec::with_capacity(ds.len());
            for (d, &q) in ds.iter().zip(&states[i]) {
                let (k, to) = d.step(q, x);
                next.push(to);
                col.push(k);
            }
            let t = match tuples.get(&next) {
                Some(&t) => t,
                None => {
                    let t = states.len();
                    tuples.insert(next.clone(), t);
                    states.push(next);
                    t
                }
            };
            let c = *colors.entry(col.clone()).or_insert_with(|| {
                color_list.push(col);
                color_list.len() - 1
            });
            prod.push((c, t));
        }
        i += 1;
    }

    let accept = |set: &[usize]| -> bool {
        let bits: Vec<bool> = (0..ds.len())
            .map(|j| set.iter().map(|&c| color_list[c][j]).max().is_some_and(|m| m % 2 == 0))
            .collect();
        f.eval(&bits)
    };

    let memory: Box<dyn ColorMemory> = match method {
        CombineMethod::ZielonkaTree => Box::new(ZielonkaTree::build(&color_list, &accept)?),
        CombineMethod::LatestAppearanceRecord => Box::new(Lar::new(color_list.len(), &accept)),
    };

    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let init = (0, memory.initial());
    ids.insert(init, 0);
    order.push(init);
    queue.push_back(0);
    let mut trans = Vec::new();
    while let Some(s) = queue.pop_front() {
        let (p, m) = order[s];
        for x in 0..letters {
            let (c, p2) = prod[p * letters + x];
            let (k, m2) = memory.step(m, c);
            let key = (p2, m2);
            let t = *ids.entry(key).or_insert_with(|| {
                order.push(key);
                queue.push_back(order.len() - 1);
                order.len() - 1
            });
            trans.push((s, x, k, t));
        }
    }
    let hi = trans.iter().map(|t| t.2).max().unwrap_or(0);
    let mut out = WordAutomaton::new(alphabet, ParityIndex::strong(0, hi.max(1)), order.len());
    for (s, x, k, t) in trans {
        out.add_transition(s, x, k, t)?;
    }
    Ok(reduce(&out))
}

trait ColorMemory {
    fn initial(&self) -> usize;
    /// Priority emitted and memory after seeing a color.
    fn step(&self, m: usize, color: usize) -> (Priority, usize);
}

struct TreeNode {
    set: u64,
    accepting: bool,
    depth: usize,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// The Zielonka tree of a Muller condition whose acceptance only depends on
/// the largest value of each coordinate.
struct ZielonkaTree {
    nodes: Vec<TreeNode>,
    leaves: Vec<usize>,
    height: usize,
    table: Vec<(Priority, usize)>,
    colors: usize,
}

impl ZielonkaTree {
    fn build(colors: &[Vec<Priority>], accept: &dyn Fn(&[usize]) -> bool) -> Result<Self> {
        if colors.len() > 64 {
            return Err(Error::TooLarge(format!("{} priority tuples", colors.len())));
        }
        let members = |set: u64| -> Vec<usize> { (0..colors.len()).filter(|&c| set >> c & 1 == 1).collect() };
        let full: u64 = if colors.len() == 64 { u64::MAX } else { (1u64 << colors.len()) - 1 };
        let mut nodes = vec![TreeNode {
            set: full,
            accepting: accept(&members(full)),
            depth: 0,
            parent: None,
            children: Vec::new(),
        }];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            let set = nodes[v].set;
            let acc = nodes[v].accepting;
            let inside = members(set);
            let arity = colors[0].len();
            let mut values: Vec<Vec<Priority>> = (0..arity)
                .map(|j| {
                    let mut vs: Vec<Priority> = inside.iter().map(|&c| colors[c][j]).collect();
                    vs.sort_unstable();
                    vs.dedup();
                    vs
                })
                .collect();
            for vs in values.iter_mut() {
                vs.reverse();
            }
            let mut boxes: Vec<u64> = Vec::new();
            let mut pick = vec![0usize; arity];
            'outer: loop {
                let bound: Vec<Priority> = (0..arity).map(|j| values[j][pick[j]]).collect();
                let b = inside
                    .iter()
                    .filter(|&&c| (0..arity).all(|j| colors[c][j] <= bound[j]))
                    .fold(0u64, |m, &c| m | 1 << c);
                if b != 0 && b != set && accept(&members(b)) != acc && !boxes.contains(&b) {
                    boxes.push(b);
                }
                for j in (0..arity).rev() {
                    pick[j] += 1;
                    if pick[j] < values[j].len() {
                        continue 'outer;
                    }
                    pick[j] = 0;
                }
                break;
            }
            let maximal: Vec<u64> = boxes
                .iter()
                .copied()
                .filter(|&b| !boxes.iter().any(|&o| o != b && o & b == b))
                .collect();
            for b in maximal {
                let id = nodes.len();
                nodes.push(TreeNode {
                    set: b,
                    accepting: !acc,
                    depth: nodes[v].depth + 1,
                    parent: Some(v),
                    children: Vec::new(),
                });
                nodes[v].children.push(id);
                stack.push(id);
            }
        }
        let mut leaves = Vec::new();
        fn collect(nodes: &[TreeNode], v: usize, out: &mut Vec<usize>) {
            if nodes[v].children.is_empty() {
                out.push(v);
            }
            for &c in &nodes[v].children {
                collect(nodes, c, out);
            }
        }
        collect(&nodes, 0, &mut leaves);
        let height = nodes.iter().map(|n| n.depth).max().unwrap();
        let mut tree = ZielonkaTree { nodes, leaves, height, table: Vec::new(), colors: colors.len() };
        let mut table = Vec::with_capacity(tree.leaves.len() * colors.len());
        for l in 0..tree.leaves.len() {
            for c in 0..colors.len() {
                table.push(tree.compute(l, c));
            }
        }
        tree.table = table;
        Ok(tree)
    }

    fn priority(&self, v: usize) -> Priority {
        let n = &self.nodes[v];
        2 * (self.height - n.depth) as Priority + if n.accepting { 0 } else { 1 }
    }

    fn leftmost_leaf(&self, mut v: usize) -> usize {
        while let Some(&c) = self.nodes[v].children.first() {
            v = c;
        }
        self.leaves.iter().position(|&l| l == v).unwrap()
    }

    fn compute(&self, leaf: usize, color: usize) -> (Priority, usize) {
        let mut below = None;
        let mut v = self.leaves[leaf];
        loop {
            if self.nodes[v].set >> color & 1 == 1 {
                break;
            }
            below = Some(v);
            v = self.nodes[v].parent.unwrap();
        }
        let Some(_) = below else {
            return (self.priority(v), leaf);
        };
        // `below` is the child of v on the path; step to the next sibling
        let mut ch = self.leaves[leaf];
        while self.nodes[ch].parent != Some(v) {
            ch = self.nodes[ch].parent.unwrap();
        }
        let sib = &self.nodes[v].children;
        let i = sib.iter().position(|&c| c == ch).unwrap();
        let next = sib[(i + 1) % sib.len()];
        (self.priority(v), self.leftmost_leaf(next))
    }
}

impl ColorMemory for ZielonkaTree {
    fn initial(&self) -> usize {
        0
    }

    fn step(&self, m: usize, color: usize) -> (Priority, usize) {
        self.table[m * self.colors + color]
    }
}

/// Interned records with their ids, and the records by id.
type RecordTable = (HashMap<Vec<u8>, usize>, Vec<Vec<u8>>);

/// Latest appearance record over the priority tuples.
struct Lar<'a> {
    records: std::cell::RefCell<RecordTable>,
    accept: &'a dyn Fn(&[usize]) -> bool,
}

impl<'a> Lar<'a> {
    fn new(colors: usize, accept: &'a dyn Fn(&[usize]) -> bool) -> Self {
        let first: Vec<u8> = (0..colors as u8).collect();
        let mut map = HashMap::new();
        map.insert(first.clone(), 0);
        Lar { records: std::cell::RefCell::new((map, vec![first])), accept }
    }
}

impl ColorMemory for Lar<'_> {
    fn initial(&self) -> usize {
        0
    }

    fn step(&self, m: usize, color: usize) -> (Priority, usize) {
        let mut rec = self.records.borrow_mut();
        let mut r = rec.1[m].clone();
        let h = r.iter().position(|&c| c as usize == color).unwrap();
        let front: Vec<usize> = r[..=h].iter().map(|&c| c as usize).collect();
        let k = 2 * h as Priority + if (self.accept)(&front) { 2 } else { 1 };
        let c = r.remove(h);
        r.insert(0, c);
        let len = rec.1.len();
        let id = *rec.0.entry(r.clone()).or_insert(len);
        if id == len {
            rec.1.push(r);
        }
        (k, id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::alphabet::Alphabet;
    use crate::automata::word::enumerate_up_words;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn inf(letter: usize) -> WordAutomaton {
        let mut d = WordAutomaton::new(ab(), ParityIndex::strong(1, 2), 1);
        d.add_transition(0, letter, 2, 0).unwrap();
        d.add_transition(0, 1 - letter, 1, 0).unwrap();
        d
    }

    #[test]
    fn truth_tables() {
        let f = BoolFn::from_table("1001").unwrap();
        assert_eq!(f, BoolFn::xnor());
        assert!(BoolFn::from_table("101").is_err());
        assert!(BoolFn::and(3).eval(&[true, true, true]));
        assert!(!BoolFn::or(2).eval(&[false, false]));
    }

    #[test]
    fn both_methods_agree_with_components() {
        let ds = [inf(0), inf(1)];
        for f in [BoolFn::and(2), BoolFn::or(2), BoolFn::xor(), BoolFn::xnor()] {
            for m in [CombineMethod::ZielonkaTree, CombineMethod::LatestAppearanceRecord] {
                let c = combine_dpas_with(&ds, &f, m).unwrap();
                assert!(c.is_deterministic());
                for w in enumerate_up_words(2, 5) {
                    assert_eq!(c.accepts(&w), f.eval(&[ds[0].accepts(&w), ds[1].accepts(&w)]), "{f:?} {m:?}");
                }
            }
        }
    }
}
