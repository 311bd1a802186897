//! Zielonka's recursive algorithm with positional strategies.
//!
//! Edge priorities are handled by splitting every edge into a position of its
//! own carrying the edge's priority; original positions get the smallest
//! priority, which never decides a play.

use super::game::{GameSolution, ParityGame, Player};
use crate::automata::Priority;

const NONE: usize = usize::MAX;

/// Adjacency lists in compressed form: the neighbours of `v` are
/// `items[start[v]..start[v + 1]]`.
struct Csr {
    start: Vec<usize>,
    items: Vec<usize>,
}

impl Csr {
    fn new(n: usize, pairs: &[(usize, usize)]) -> Csr {
        let mut start = vec![0; n + 1];
        for &(a, _) in pairs {
            start[a + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut items = vec![0; pairs.len()];
        for &(a, b) in pairs {
            items[fill[a]] = b;
            fill[a] += 1;
        }
        Csr { start, items }
    }

    fn of(&self, v: usize) -> &[usize] {
        &self.items[self.start[v]..self.start[v + 1]]
    }
}

struct Arena {
    owner: Vec<Player>,
    prio: Vec<Priority>,
    succ: Csr,
    pred: Csr,
}

impl Arena {
    fn from_game(g: &ParityGame) -> Arena {
        let n = g.num_positions();
        let low = g.priority_range().map_or(0, |r| r.0);
        let mut owner: Vec<Player> = (0..n).map(|v| g.owner(v)).collect();
        let mut prio = vec![low; n];
        let mut arcs = Vec::with_capacity(2 * g.edges().len());
        for v in 0..n {
            arcs.extend(g.out_edges(v).iter().map(|&e| (v, n + e)));
        }
        for (e, edge) in g.edges().iter().enumerate() {
            owner.push(Player::I);
            prio.push(edge.priority);
            arcs.push((n + e, edge.to));
        }
        let total = owner.len();
        let back: Vec<(usize, usize)> = arcs.iter().map(|&(a, b)| (b, a)).collect();
        Arena { owner, prio, succ: Csr::new(total, &arcs), pred: Csr::new(total, &back) }
    }

    fn len(&self) -> usize {
        self.owner.len()
    }

    /// Attractor of `target` for `p` inside `sub`, recording attracting moves.
    fn attractor(&self, sub: &[bool], target: &[bool], p: Player, strat: &mut [usize]) -> Vec<bool> {
        let mut attr: Vec<bool> = target.to_vec();
        let mut count: Vec<usize> = vec![0; self.len()];
        for v in 0..self.len() {
            if sub[v] && self.owner[v] != p {
                count[v] = self.succ.of(v).iter().filter(|&&u| sub[u]).count();
            }
        }
        let mut stack: Vec<usize> = (0..self.len()).filter(|&v| attr[v]).collect();
        while let Some(u) = stack.pop() {
            for &v in self.pred.of(u) {
                if !sub[v] || attr[v] {
                    continue;
                }
                if self.owner[v] == p {
                    attr[v] = true;
                    strat[v] = u;
                    stack.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        attr
    }

    /// Winner of each position of `sub` and moves for positions won by
    /// their owner.
    fn solve(&self, sub: &[bool]) -> (Vec<Option<Player>>, Vec<usize>) {
        let n = self.len();
        let mut win = vec![None; n];
        let mut strat = vec![NONE; n];
        let Some(d) = (0..n).filter(|&v| sub[v]).map(|v| self.prio[v]).max() else {
            return (win, strat);
        };
        let p = Player::of_priority(d);
        if (0..n).all(|v| !sub[v] || self.prio[v] % 2 == d % 2) {
            for v in (0..n).filter(|&v| sub[v]) {
                win[v] = Some(p);
                if self.owner[v] == p {
                    strat[v] = *self.succ.of(v).iter().find(|&&u| sub[u]).unwrap();
                }
            }
            return (win, strat);
        }
        let top: Vec<bool> = (0..n).map(|v| sub[v] && self.prio[v] == d).collect();
        let mut attr_moves = vec![NONE; n];
        let a = self.attractor(sub, &top, p, &mut attr_moves);
        let rest: Vec<bool> = (0..n).map(|v| sub[v] && !a[v]).collect();
        let (w1, s1) = self.solve(&rest);
        let opp = p.opponent();
        if !(0..n).any(|v| w1[v] == Some(opp)) {
            for v in (0..n).filter(|&v| sub[v]) {
                win[v] = Some(p);
                if self.owner[v] != p {
                    continue;
                }
                strat[v] = if rest[v] {
                    s1[v]
                } else if top[v] {
                    *self.succ.of(v).iter().find(|&&u| sub[u]).unwrap()
                } else {
                    attr_moves[v]
                };
            }
            return (win, strat);
        }
        let lost: Vec<bool> = (0..n).map(|v| w1[v] == Some(opp)).collect();
        let mut b_moves = vec![NONE; n];
        let b = self.attractor(sub, &lost, opp, &mut b_moves);
        let remain: Vec<bool> = (0..n).map(|v| sub[v] && !b[v]).collect();
        let (w2, s2) = self.solve(&remain);
        for v in (0..n).filter(|&v| sub[v]) {
            if b[v] {
                win[v] = Some(opp);
                if self.owner[v] == opp {
                    strat[v] = if lost[v] { s1[v] } else { b_moves[v] };
                }
            } else {
                win[v] = w2[v];
                if w2[v] == Some(self.owner[v]) {
                    strat[v] = s2[v];
                }
            }
        }
        (win, strat)
    }
}

/// Solves a parity game, returning both winning regions with positional
/// strategies.
pub fn zielonka(g: &ParityGame) -> GameSolution {
    let arena = Arena::from_game(g);
    let n = g.num_positions();
    let all = vec![true; arena.len()];
    let (win, strat) = arena.solve(&all);
    let winner: Vec<Player> = (0..n).map(|v| win[v].expect("every position is decided")).collect();
    let strategy = (0..n)
        .map(|v| {
            if winner[v] == g.owner(v) && strat[v] != NONE {
                Some(strat[v] - n)
            } else {
                None
            }
        })
        .collect();
    GameSolution { winner, strategy }
}
