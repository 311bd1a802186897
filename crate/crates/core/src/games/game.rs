use std::fmt;

use crate::automata::graph::components;
use crate::automata::Priority;
use crate::error::{Error, Result};

/// The two players. Player II wins a play iff the largest priority seen
/// infinitely often is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }

    /// The player favoured by a priority.
    pub fn of_priority(k: Priority) -> Player {
        if k.is_multiple_of(2) {
            Player::II
        } else {
            Player::I
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub priority: Priority,
    pub to: usize,
}

/// A parity game with priorities on edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityGame {
    names: Vec<String>,
    owners: Vec<Player>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    initial: usize,
}

impl ParityGame {
    pub fn new() -> Self {
        ParityGame::default()
    }

    pub fn add_position(&mut self, name: impl Into<String>, owner: Player) -> usize {
        self.names.push(name.into());
        self.owners.push(owner);
        self.out.push(Vec::new());
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, priority: Priority, to: usize) -> Result<usize> {
        if from >= self.names.len() || to >= self.names.len() {
            return Err(Error::invalid("edge between unknown positions"));
        }
        self.edges.push(Edge { from, priority, to });
        self.out[from].push(self.edges.len() - 1);
        Ok(self.edges.len() - 1)
    }

    pub fn set_initial(&mut self, v: usize) {
        self.initial = v;
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_positions(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn position_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    /// Ids of the edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn priority_range(&self) -> Option<(Priority, Priority)> {
        let lo = self.edges.iter().map(|e| e.priority).min()?;
        let hi = self.edges.iter().map(|e| e.priority).max()?;
        Some((lo, hi))
    }

    /// Every position needs a move.
    pub fn validate(&self) -> Result<()> {
        if self.names.is_empty() {
            return Err(Error::invalid("game without positions"));
        }
        if self.initial >= self.names.len() {
            return Err(Error::invalid("unknown initial position"));
        }
        if let Some(v) = (0..self.names.len()).find(|&v| self.out[v].is_empty()) {
            return Err(Error::invalid(format!("position {} has no move", self.names[v])));
        }
        Ok(())
    }
}

/// Winning regions and positional winning strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSolution {
    pub winner: Vec<Player>,
    /// For every position won by its owner, the id of the edge to take.
    pub strategy: Vec<Option<usize>>,
}

impl GameSolution {
    pub fn region(&self, p: Player) -> Vec<usize> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == p).collect()
    }
}

/// Checks that both regions are closed under the claimed strategies and that
/// every cycle compatible with a strategy has the right parity.
pub fn check_solution(g: &ParityGame, sol: &GameSolution) -> Result<()> {
    let n = g.num_positions();
    if sol.winner.len() != n || sol.strategy.len() != n {
        return Err(Error::Invariant("solution size does not match the game".into()));
    }
    for p in [Player::I, Player::II] {
        let mut kept: Vec<Edge> = Vec::new();
        for v in (0..n).filter(|&v| sol.winner[v] == p) {
            if g.owner(v) == p {
                let e = sol.strategy[v]
                    .ok_or_else(|| Error::Invariant(format!("no move for {} at {}", p, g.name(v))))?;
                let edge = g.edge(e);
                if edge.from != v || sol.winner[edge.to] != p {
                    return Err(Error::Invariant(format!("move at {} leaves the region of {p}", g.name(v))));
                }
                kept.push(edge);
            } else {
                for &e in g.out_edges(v) {
                    let edge = g.edge(e);
                    if sol.winner[edge.to] != p {
                        return Err(Error::Invariant(format!("{} escapes from {}", p.opponent(), g.name(v))));
                    }
                    kept.push(edge);
                }
            }
        }
        let mut bad: Vec<Priority> = kept
            .iter()
            .map(|e| e.priority)
            .filter(|&k| Player::of_priority(k) != p)
            .collect();
        bad.sort_unstable();
        bad.dedup();
        for m in bad {
            let comp = components(n, kept.iter().filter(|e| e.priority <= m).map(|e| (e.from, e.to)));
            if kept.iter().any(|e| e.priority == m && comp[e.from] == comp[e.to]) {
                return Err(Error::Invariant(format!("{} can close a cycle with top priority {m}", p.opponent())));
            }
        }
    }
    Ok(())
}

pub fn verify_strategy(g: &ParityGame, sol: &GameSolution) -> bool {
    check_solution(g, sol).is_ok()
}
