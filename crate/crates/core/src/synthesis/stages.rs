//! The three stages turning a lookahead strategy into a plain transducer:
//! delaying outputs to split points, removing neutral letters, and emitting
//! representative letters for algebra elements.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::lookahead::LookaheadLetter;
use crate::automata::{Alphabet, Symbol, Transducer, UpWord};
use crate::error::{Error, Result};
use crate::wilke::{Homomorphism, SplitSchedule, WilkeAlgebra};

/// Open sector `(s, g)` with `s ∈ S₊¹` and `g : S_ω → T₊¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenSector {
    pub s: Option<usize>,
    pub g: Vec<Option<usize>>,
}

/// Closed sector `(t, s, g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSector {
    pub t: usize,
    pub open: OpenSector,
}

impl OpenSector {
    pub fn empty(inf_len: usize) -> Self {
        OpenSector { s: None, g: vec![None; inf_len] }
    }

    /// Update by an input letter `w` and a strategy output `f : S_ω → T₊`.
    pub fn update(&self, alpha: &Homomorphism, beta: &WilkeAlgebra, w: Symbol, f: &[usize]) -> OpenSector {
        let a = alpha.letters[w];
        let s = alpha.algebra.mul1(self.s, Some(a));
        let g = (0..self.g.len())
            .map(|h| beta.mul1(self.g[alpha.algebra.mixed(a, h)], Some(f[h])))
            .collect();
        OpenSector { s, g }
    }
}

/// State of the delayed transducer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DelayedState {
    /// Reading position `n ≤ i₀` with the strategy transducer in `q`.
    Direct { n: usize, q: usize },
    /// After `i₀`: strategy state, lasso position of the next letter, sectors.
    Sectors { q: usize, pos: usize, open: OpenSector, closed: BTreeSet<ClosedSector> },
    /// Reached on inputs whose `W` component differs from the fixed parameter.
    Sink,
}

/// The delayed transducer for a fixed parameter `w`, before exploration.
pub struct SafetyDelayed<'a> {
    pub tau: &'a Transducer<Symbol, LookaheadLetter<usize>>,
    pub alpha: &'a Homomorphism,
    pub beta: &'a WilkeAlgebra,
    pub w: UpWord<Symbol>,
    pub lookahead: UpWord<usize>,
    pub schedule: SplitSchedule,
    /// The `W × X` input alphabet.
    pub input: Alphabet,
}

/// One step of the delayed transducer together with the data needed to
/// justify it.
#[derive(Clone, Debug)]
pub struct DelayedStep {
    pub output: Option<usize>,
    pub next: DelayedState,
    /// The strategy output read at this step.
    pub f: Vec<usize>,
    /// Closed sector chosen in the final check, if any.
    pub chosen: Option<ClosedSector>,
}

impl<'a> SafetyDelayed<'a> {
    pub fn new(
        tau: &'a Transducer<Symbol, LookaheadLetter<usize>>,
        alpha: &'a Homomorphism,
        beta: &'a WilkeAlgebra,
        w: &UpWord<Symbol>,
        schedule: SplitSchedule,
        input: Alphabet,
    ) -> Self {
        SafetyDelayed {
            tau,
            alpha,
            beta,
            w: w.clone(),
            lookahead: alpha.lookahead_stream(w),
            schedule,
            input,
        }
    }

    pub fn initial(&self) -> DelayedState {
        DelayedState::Direct { n: 0, q: self.tau.initial() }
    }

    pub fn step(&self, state: &DelayedState, a: Symbol) -> Result<DelayedStep> {
        let wl = self.input.decode(a)[0];
        let sink = DelayedStep { output: Some(0), next: DelayedState::Sink, f: Vec::new(), chosen: None };
        match state {
            DelayedState::Sink => Ok(sink),
            DelayedState::Direct { n, q } => {
                if wl != *self.w.at(*n) {
                    return Ok(sink);
                }
                let (f, q2) = self.tau.step(*q, &a)?;
                let out = f[*self.lookahead.at(*n)];
                let next = if *n == self.schedule.anchor {
                    DelayedState::Sectors {
                        q: *q2,
                        pos: self.w.lasso_pos(n + 1),
                        open: OpenSector::empty(self.alpha.algebra.inf_len()),
                        closed: BTreeSet::new(),
                    }
                } else {
                    DelayedState::Direct { n: n + 1, q: *q2 }
                };
                Ok(DelayedStep { output: Some(out), next, f: f.clone(), chosen: None })
            }
            DelayedState::Sectors { q, pos, open, closed } => {
                if wl != *self.w.lasso_letter(*pos) {
                    return Ok(sink);
                }
                let e = self.schedule.e;
                let (f, q2) = self.tau.step(*q, &a)?;
                let open = open.update(self.alpha, self.beta, wl, f);
                let mut closed: BTreeSet<ClosedSector> = closed
                    .iter()
                    .map(|c| ClosedSector { t: c.t, open: c.open.update(self.alpha, self.beta, wl, f) })
                    .collect();
                if open.s == Some(e) {
                    let t = open.g[self.alpha.algebra.omega(e)]
                        .ok_or_else(|| Error::Invariant("sector value is neutral".into()))?;
                    closed.insert(ClosedSector { t, open: OpenSector::empty(open.g.len()) });
                }
                let pos = self.w.next_pos(*pos);
                if let Some(c) = closed.iter().find(|c| c.open.s == Some(e)).cloned() {
                    let next = DelayedState::Sectors { q: *q2, pos, open: c.open.clone(), closed: BTreeSet::new() };
                    return Ok(DelayedStep { output: Some(c.t), next, f: f.clone(), chosen: Some(c) });
                }
                let next = DelayedState::Sectors { q: *q2, pos, open, closed };
                Ok(DelayedStep { output: None, next, f: f.clone(), chosen: None })
            }
        }
    }

    /// Explores the reachable part into a transducer `W × X ↠ T₊¹`.
    pub fn build(&self) -> Result<Transducer<Symbol, Option<usize>>> {
        let inputs: Vec<Symbol> = (0..self.input.len()).collect();
        let (t, _) = Transducer::explore(inputs, self.initial(), |s, &a| {
            let st = self.step(s, a)?;
            Ok((st.output, st.next))
        })?;
        Ok(t)
    }
}

/// The delayed transducer `θ_w : W × X ↠ T₊¹`.
pub fn safety_delayed_transducer(
    tau: &Transducer<Symbol, LookaheadLetter<usize>>,
    alpha: &Homomorphism,
    beta: &WilkeAlgebra,
    w: &UpWord<Symbol>,
    schedule: SplitSchedule,
    input: Alphabet,
) -> Result<Transducer<Symbol, Option<usize>>> {
    SafetyDelayed::new(tau, alpha, beta, w, schedule, input).build()
}

/// For every lasso position `c`, whether a position whose next letter sits at
/// `c` is `e`-splittable.
pub fn e_splittable_classes(h: &Homomorphism, w: &UpWord<Symbol>, e: usize) -> Vec<bool> {
    let len = w.lasso_len();
    let s = &h.algebra;
    // edges c -> c' when a block starting at c and ending before c' maps to e
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); len];
    for (c, out) in edges.iter_mut().enumerate() {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut stack = vec![(c, None::<usize>)];
        while let Some((pos, v)) = stack.pop() {
            let v2 = s.mul1(v, Some(h.letters[*w.lasso_letter(pos)])).unwrap();
            let next = w.next_pos(pos);
            if v2 == e && !out.contains(&next) {
                out.push(next);
            }
            if seen.insert((next, v2)) {
                stack.push((next, Some(v2)));
            }
        }
    }
    // classes with an infinite path: repeatedly drop nodes without live successors
    let mut live = vec![true; len];
    loop {
        let mut changed = false;
        for c in 0..len {
            if live[c] && !edges[c].iter().any(|&d| live[d]) {
                live[c] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

pub fn is_e_splittable(h: &Homomorphism, w: &UpWord<Symbol>, e: usize, i: usize) -> bool {
    e_splittable_classes(h, w, e)[w.lasso_pos(i + 1)]
}

/// Record of one instrumented step of the delayed transducer.
#[derive(Clone, Debug)]
pub struct TraceLine {
    pub position: usize,
    pub output: Option<usize>,
    pub anchor: usize,
    pub last_shift: usize,
    pub closed: usize,
}

impl std::fmt::Display for TraceLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let out = self.output.map_or("eps".to_string(), |t| t.to_string());
        write!(f, "k={} out={} i={} j0={} closed={}", self.position, out, self.anchor, self.last_shift, self.closed)
    }
}

/// Runs the delayed transducer on `⟨w, x⟩` for `steps` letters and checks,
/// after every step past `i₀`, that the sector data describe the positions
/// claimed by the correctness invariant. Descriptions are recomputed from the
/// input prefix each time.
pub fn trace_safety_delayed(sd: &SafetyDelayed<'_>, x: &UpWord<Symbol>, steps: usize) -> Result<Vec<TraceLine>> {
    let input = sd.input.tuple_word(&[&sd.w, x]);
    let alpha = sd.alpha;
    let s = &alpha.algebra;
    let e = sd.schedule.e;
    // reference stream t_n = f_n(lk_n) and the strategy outputs f_n
    let letters: Vec<Symbol> = input.take(steps);
    let mut fs: Vec<Vec<usize>> = Vec::with_capacity(steps);
    let mut q = sd.tau.initial();
    for a in &letters {
        let (f, q2) = sd.tau.step(q, a)?;
        fs.push(f.clone());
        q = *q2;
    }
    let t_at = |n: usize| fs[n][*sd.lookahead.at(n)];
    let aw = |i: usize, j: usize| -> Option<usize> {
        (i + 1..=j).fold(None, |acc, n| s.mul1(acc, Some(alpha.letters[*sd.w.at(n)])))
    };
    let tprod = |i: usize, j: usize| -> Option<usize> { (i + 1..=j).fold(None, |acc, n| sd.beta.mul1(acc, Some(t_at(n)))) };
    let suffix = |k: usize| alpha.eval_up(&sd.w.suffix(k + 1));
    let describes_open = |o: &OpenSector, i: usize, k: usize| o.s == aw(i, k) && o.g[suffix(k)] == tprod(i, k);
    let splittable = e_splittable_classes(alpha, &sd.w, e);
    let fail = |k: usize, what: &str| Err(Error::Invariant(format!("position {k}: {what}")));

    let mut state = sd.initial();
    let mut i = sd.schedule.anchor;
    let mut j0 = i;
    // positions j each closed sector was created for
    let mut origin: HashMap<ClosedSector, BTreeSet<usize>> = HashMap::new();
    let mut out = Vec::new();
    for (k1, &a) in letters.iter().enumerate() {
        let st = sd.step(&state, a)?;
        if k1 > sd.schedule.anchor {
            let DelayedState::Sectors { open: before_open, closed: before, .. } = &state else {
                return fail(k1, "left the sector phase");
            };
            // replay Points 2 and 3 on the ghost origins
            let wl = *sd.w.at(k1);
            let mut next_origin: HashMap<ClosedSector, BTreeSet<usize>> = HashMap::new();
            for c in before {
                let moved = ClosedSector { t: c.t, open: c.open.update(alpha, sd.beta, wl, &fs[k1]) };
                next_origin.entry(moved).or_default().extend(origin.get(c).into_iter().flatten());
            }
            if aw(i, k1) == Some(e) {
                let upd = before_open.update(alpha, sd.beta, wl, &fs[k1]);
                let t = upd.g[s.omega(e)].ok_or_else(|| Error::Invariant("sector value is neutral".into()))?;
                next_origin
                    .entry(ClosedSector { t, open: OpenSector::empty(s.inf_len()) })
                    .or_default()
                    .insert(k1);
            }
            origin = next_origin;
            if let Some(c) = &st.chosen {
                let j = *origin.get(c).and_then(|js| js.iter().find(|&&j| aw(j, k1) == Some(e))).ok_or_else(|| {
                    Error::Invariant(format!("position {k1}: chosen sector has no origin"))
                })?;
                i = j;
                j0 = k1;
                origin.clear();
            }
        }
        state = st.next.clone();
        if k1 >= sd.schedule.anchor {
            let DelayedState::Sectors { open, closed, .. } = &state else {
                return fail(k1, "not in the sector phase");
            };
            let k = k1;
            if !splittable[sd.w.lasso_pos(i + 1)] {
                return fail(k, "anchor is not e-splittable");
            }
            if !describes_open(open, i, k) {
                return fail(k, "open sector does not describe (i, k)");
            }
            // the value t is only meaningful for e-splittable j, the only ones a shift can use
            let split = |j: usize| splittable[sd.w.lasso_pos(j + 1)];
            let matches = |c: &ClosedSector, j: usize| {
                describes_open(&c.open, j, k) && (!split(j) || tprod(i, j) == Some(c.t))
            };
            for c in closed {
                if !(i + 1..=k).any(|j| aw(i, j) == Some(e) && matches(c, j)) {
                    return fail(k, "closed sector describes no triple");
                }
            }
            for j in j0 + 1..=k {
                if aw(i, j) == Some(e) && !closed.iter().any(|c| matches(c, j)) {
                    return fail(k, "a split candidate has no closed sector");
                }
            }
            out.push(TraceLine { position: k, output: st.output, anchor: i, last_shift: j0, closed: closed.len() });
        } else {
            if st.output != Some(t_at(k1)) {
                return fail(k1, "direct phase output differs from the reference");
            }
            out.push(TraceLine { position: k1, output: st.output, anchor: i, last_shift: j0, closed: 0 });
        }
    }
    Ok(out)
}

/// State of the neutral-element eliminator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum NeutralState {
    Copy(Option<usize>),
    Linked(usize, Option<usize>),
    Error,
}

/// Transducer `T₊¹ ↠ T₊` preserving the infinite product of saturated
/// inputs whose first `r` letters are not neutral.
pub fn elim_neutral_transducer(t: &WilkeAlgebra) -> Result<Transducer<Option<usize>, usize>> {
    let inputs: Vec<Option<usize>> = std::iter::once(None).chain((0..t.fin_len()).map(Some)).collect();
    let (tr, _) = Transducer::explore(inputs, NeutralState::Copy(None), |st, &x| {
        Ok(match (st, x) {
            (NeutralState::Error, _) | (NeutralState::Copy(_), None) => (0, NeutralState::Error),
            (NeutralState::Copy(c), Some(x)) => {
                let ct = t.mul1(*c, Some(x)).unwrap();
                match t.stabilizing_idempotent(ct) {
                    Some(e) => (x, NeutralState::Linked(e, None)),
                    None => (x, NeutralState::Copy(Some(ct))),
                }
            }
            (NeutralState::Linked(e, c), x) => {
                let ct = t.mul1(*c, x);
                match ct.and_then(|ct| t.stabilizing_idempotent(ct).map(|e2| (ct, e2))) {
                    Some((ct, e2)) => (ct, NeutralState::Linked(e2, None)),
                    None => (*e, NeutralState::Linked(*e, ct)),
                }
            }
        })
    })?;
    Ok(tr)
}

/// Fixed words `u_t` with `β(u_t) = t`.
#[derive(Clone, Debug)]
pub struct Representatives {
    pub words: Vec<Vec<Symbol>>,
}

impl Representatives {
    /// The shortest, lexicographically least representatives of an onto
    /// homomorphism.
    pub fn of(beta: &Homomorphism) -> Result<Self> {
        if beta.fin_witness.len() != beta.algebra.fin_len() {
            return Err(Error::invalid("homomorphism is not onto"));
        }
        Ok(Representatives { words: beta.fin_witness.clone() })
    }
}

/// Transducer `T₊ ↠ A_Y` whose output maps under `β` to the infinite product
/// of its input.
pub fn monoid_to_letter_transducer(reps: &Representatives, t: &WilkeAlgebra) -> Result<Transducer<usize, Symbol>> {
    if reps.words.len() != t.fin_len() || reps.words.iter().any(|u| u.is_empty()) {
        return Err(Error::invalid("every element needs a non-empty representative"));
    }
    let inputs: Vec<usize> = (0..t.fin_len()).collect();
    let (tr, _) = Transducer::explore(inputs, (None::<usize>, Vec::<Symbol>::new()), |(c, buf), &x| {
        if let Some((&a, rest)) = buf.split_first() {
            Ok((a, (t.mul1(*c, Some(x)), rest.to_vec())))
        } else {
            let u = &reps.words[t.mul1(*c, Some(x)).unwrap()];
            Ok((u[0], (None, u[1..].to_vec())))
        }
    })?;
    Ok(tr)
}
