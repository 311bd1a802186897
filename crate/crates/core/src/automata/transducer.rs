use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::alphabet::{Alphabet, Symbol};
use super::word::UpWord;
use crate::error::{Error, Result};

/// Upper bound on the number of states built by [`Transducer::explore`].
pub const TRANSDUCER_LIMIT: usize = 5_000_000;

/// A deterministic letter-to-letter transducer (Mealy machine) reading
/// values of `I` and writing values of `O`.
///
/// The input alphabet is the finite list `inputs`; the output alphabet is
/// whatever values the transitions carry.
#[derive(Clone, Debug)]
pub struct Transducer<I, O> {
    inputs: Vec<I>,
    lookup: HashMap<I, usize>,
    initial: usize,
    delta: Vec<(O, usize)>,
}

impl<I: Eq + Hash, O: PartialEq> PartialEq for Transducer<I, O> {
    fn eq(&self, other: &Self) -> bool {
        self.inputs == other.inputs && self.initial == other.initial && self.delta == other.delta
    }
}

impl<I: Clone + Eq + Hash, O: Clone> Transducer<I, O> {
    /// Builds the transducer from a table indexed by `state * |inputs| + i`.
    pub fn from_table(inputs: Vec<I>, initial: usize, delta: Vec<(O, usize)>) -> Result<Self> {
        let lookup: HashMap<I, usize> = inputs.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        if lookup.len() != inputs.len() || inputs.is_empty() {
            return Err(Error::invalid("transducer inputs must be distinct and non-empty"));
        }
        if !delta.len().is_multiple_of(inputs.len()) || delta.is_empty() {
            return Err(Error::invalid("transition table has the wrong size"));
        }
        let states = delta.len() / inputs.len();
        if initial >= states || delta.iter().any(|&(_, t)| t >= states) {
            return Err(Error::invalid("transition to an unknown state"));
        }
        Ok(Transducer { inputs, lookup, initial, delta })
    }

    /// Builds the reachable part of a transducer whose states are values of
    /// `K`, given its transition function.
    pub fn explore<K: Clone + Eq + Hash>(
        inputs: Vec<I>,
        start: K,
        mut step: impl FnMut(&K, &I) -> Result<(O, K)>,
    ) -> Result<(Self, Vec<K>)> {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut keys = vec![start.clone()];
        ids.insert(start, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut rows: Vec<Vec<(O, usize)>> = vec![Vec::new()];
        while let Some(s) = queue.pop_front() {
            let mut row = Vec::with_capacity(inputs.len());
            for x in &inputs {
                let (o, k) = step(&keys[s], x)?;
                let t = match ids.get(&k) {
                    Some(&t) => t,
                    None => {
                        let t = keys.len();
                        if t >= TRANSDUCER_LIMIT {
                            return Err(Error::TooLarge("transducer".into()));
                        }
                        ids.insert(k.clone(), t);
                        keys.push(k);
                        rows.push(Vec::new());
                        queue.push_back(t);
                        t
                    }
                };
                row.push((o, t));
            }
            rows[s] = row;
        }
        let delta = rows.into_iter().flatten().collect();
        Ok((Transducer::from_table(inputs, 0, delta)?, keys))
    }

    pub fn inputs(&self) -> &[I] {
        &self.inputs
    }

    pub fn num_states(&self) -> usize {
        self.delta.len() / self.inputs.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn input_index(&self, x: &I) -> Option<usize> {
        self.lookup.get(x).copied()
    }

    pub fn step_index(&self, s: usize, i: usize) -> &(O, usize) {
        &self.delta[s * self.inputs.len() + i]
    }

    pub fn step(&self, s: usize, x: &I) -> Result<&(O, usize)> {
        let i = self.input_index(x).ok_or_else(|| Error::invalid("letter outside the transducer's input alphabet"))?;
        Ok(self.step_index(s, i))
    }

    /// Outputs on a finite input word.
    pub fn run(&self, word: &[I]) -> Result<Vec<O>> {
        let mut s = self.initial;
        let mut out = Vec::with_capacity(word.len());
        for x in word {
            let (o, t) = self.step(s, x)?;
            out.push(o.clone());
            s = *t;
        }
        Ok(out)
    }

    pub fn map_outputs<P: Clone>(&self, mut f: impl FnMut(&O) -> P) -> Transducer<I, P> {
        Transducer {
            inputs: self.inputs.clone(),
            lookup: self.lookup.clone(),
            initial: self.initial,
            delta: self.delta.iter().map(|(o, t)| (f(o), *t)).collect(),
        }
    }

    /// Transitions as `(state, input index, output, target)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, &O, usize)> + '_ {
        let n = self.inputs.len();
        self.delta.iter().enumerate().map(move |(i, (o, t))| (i / n, i % n, o, *t))
    }
}

impl<I: Clone + Eq + Hash, O: Clone + Eq> Transducer<I, O> {
    /// Output on an ultimately periodic input.
    pub fn apply(&self, w: &UpWord<I>) -> Result<UpWord<O>> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut out = Vec::new();
        let (mut s, mut pos) = (self.initial, 0);
        loop {
            if let Some(&r) = seen.get(&(s, pos)) {
                let period = out.split_off(r);
                return UpWord::new(out, period);
            }
            seen.insert((s, pos), out.len());
            let (o, t) = self.step(s, w.lasso_letter(pos))?;
            out.push(o.clone());
            s = *t;
            pos = w.next_pos(pos);
        }
    }
}

/// Output of a transducer on an ultimately periodic word.
pub fn transducer_apply<I, O>(t: &Transducer<I, O>, w: &UpWord<I>) -> Result<UpWord<O>>
where
    I: Clone + Eq + Hash,
    O: Clone + Eq,
{
    t.apply(w)
}

/// Sequential composition: the outputs of `first` are fed into `second`.
pub fn transducer_compose<I, M, O>(first: &Transducer<I, M>, second: &Transducer<M, O>) -> Result<Transducer<I, O>>
where
    I: Clone + Eq + Hash,
    M: Clone + Eq + Hash,
    O: Clone,
{
    let (t, _) = Transducer::explore(first.inputs.clone(), (first.initial, second.initial), |&(s, r), x| {
        let (m, s2) = first.step(s, x)?;
        let i = second
            .input_index(m)
            .ok_or_else(|| Error::mismatch("output of the first transducer is not an input of the second"))?;
        let (o, r2) = second.step_index(r, i);
        Ok((o.clone(), (*s2, *r2)))
    })?;
    Ok(t)
}

/// A transducer between named alphabets.
#[derive(Clone, Debug, PartialEq)]
pub struct LetterTransducer {
    pub input: Alphabet,
    pub output: Alphabet,
    pub machine: Transducer<Symbol, Symbol>,
    pub state_names: Vec<String>,
}

impl LetterTransducer {
    pub fn new(input: Alphabet, output: Alphabet, machine: Transducer<Symbol, Symbol>) -> Self {
        let state_names = (0..machine.num_states()).map(|i| format!("s{i}")).collect();
        LetterTransducer { input, output, machine, state_names }
    }

    pub fn apply(&self, w: &UpWord<Symbol>) -> Result<UpWord<Symbol>> {
        self.machine.apply(w)
    }
}
