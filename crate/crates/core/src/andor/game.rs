//! The Prover-Delayer game on AND-OR trees.
//!
//! Each round the Prover names an unassigned variable; the Delayer answers
//! 0 or 1, or defers, scoring a point and letting the Prover pick the bit.
//! The state is the restricted function, kept as a reduced tree via
//! `update` followed by `contract`. The game ends when the tree is empty.

use std::cell::RefCell;
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{delayer_move, prover_move, AndOrTree};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Answer(bool),
    Defer,
}

#[derive(Debug, Clone)]
pub struct GameState {
    pub tree: AndOrTree,
    pub assigned: Vec<Option<bool>>,
    pub score: u32,
}

impl GameState {
    pub fn unassigned(&self) -> Vec<usize> {
        (0..self.assigned.len()).filter(|&i| self.assigned[i].is_none()).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Round {
    pub var: usize,
    pub decision: Decision,
    pub bit: bool,
    pub score: u32,
    pub p: u32,
    pub s: u32,
    /// The reduced tree after the round.
    pub tree: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameTranscript {
    pub initial_p: u32,
    pub initial_s: u32,
    pub rounds: Vec<Round>,
    pub final_score: u32,
    /// The value the function was forced to.
    pub value: bool,
}

pub trait ProverPolicy {
    fn choose_var(&mut self, state: &GameState) -> Result<usize>;
    /// The bit after a defer on `var`.
    fn choose_bit(&mut self, state: &GameState, var: usize) -> Result<bool>;
}

pub trait DelayerPolicy {
    fn respond(&mut self, state: &GameState, var: usize) -> Result<Decision>;
}

pub fn play(t0: &AndOrTree, prover: &mut dyn ProverPolicy, delayer: &mut dyn DelayerPolicy) -> Result<GameTranscript> {
    let tree = t0.contract();
    let m0 = tree.measures();
    let mut state = GameState {
        assigned: vec![None; tree.n()],
        tree,
        score: 0,
    };
    let mut rounds = Vec::new();
    while !state.tree.is_empty() {
        let var = prover.choose_var(&state)?;
        if var >= state.assigned.len() || state.assigned[var].is_some() {
            return Err(Error::InvalidParameter(format!("x{var} is not an unassigned variable")));
        }
        let decision = delayer.respond(&state, var)?;
        let bit = match decision {
            Decision::Answer(b) => b,
            Decision::Defer => {
                state.score += 1;
                prover.choose_bit(&state, var)?
            }
        };
        state.assigned[var] = Some(bit);
        state.tree = state.tree.update(var, bit)?.contract();
        let m = state.tree.measures();
        rounds.push(Round {
            var,
            decision,
            bit,
            score: state.score,
            p: m.p,
            s: m.s,
            tree: state.tree.to_string(),
        });
    }
    Ok(GameTranscript {
        initial_p: m0.p,
        initial_s: m0.s,
        rounds,
        final_score: state.score,
        value: state.tree.constant().expect("game ends on the empty tree"),
    })
}

/// Queries the leftmost leaf; picks 0 after a defer.
#[derive(Debug, Default)]
pub struct PaperProver;

impl ProverPolicy for PaperProver {
    fn choose_var(&mut self, state: &GameState) -> Result<usize> {
        prover_move(&state.tree)
    }

    fn choose_bit(&mut self, _: &GameState, _: usize) -> Result<bool> {
        Ok(false)
    }
}

#[derive(Debug, Default)]
pub struct PaperDelayer;

impl DelayerPolicy for PaperDelayer {
    fn respond(&mut self, state: &GameState, var: usize) -> Result<Decision> {
        delayer_move(&state.tree, var)
    }
}

/// Any unassigned variable, present in the tree or not, and a fair bit.
pub struct RandomProver(ChaCha8Rng);

impl RandomProver {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        RandomProver(rng)
    }
}

impl ProverPolicy for RandomProver {
    fn choose_var(&mut self, state: &GameState) -> Result<usize> {
        let free = state.unassigned();
        Ok(free[self.0.gen_range(0..free.len())])
    }

    fn choose_bit(&mut self, _: &GameState, _: usize) -> Result<bool> {
        Ok(self.0.gen_bool(0.5))
    }
}

/// Answers 0, answers 1 or defers, uniformly.
pub struct RandomDelayer(ChaCha8Rng);

impl RandomDelayer {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(2);
        RandomDelayer(rng)
    }
}

impl DelayerPolicy for RandomDelayer {
    fn respond(&mut self, _: &GameState, _: usize) -> Result<Decision> {
        Ok(match self.0.gen_range(0..3) {
            0 => Decision::Answer(false),
            1 => Decision::Answer(true),
            _ => Decision::Defer,
        })
    }
}

pub const MAX_EXHAUSTIVE_LEAVES: usize = 8;

/// What an exhaustive player assumes about the other side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Opponent {
    /// The other side plays the paper strategy exactly.
    Paper,
    /// The other side plays optimally.
    Adversarial,
}

/// Optimal play by full game-tree search, memoized on the reduced tree.
/// As Prover it minimizes the final score, as Delayer it maximizes it.
pub struct Exhaustive {
    opponent: Opponent,
    prover_memo: HashMap<AndOrTree, u32>,
    delayer_memo: HashMap<AndOrTree, u32>,
}

impl Exhaustive {
    pub fn new(opponent: Opponent) -> Self {
        Exhaustive {
            opponent,
            prover_memo: HashMap::new(),
            delayer_memo: HashMap::new(),
        }
    }

    fn check(t: &AndOrTree) -> Result<()> {
        let leaves = t.num_leaves();
        if leaves > MAX_EXHAUSTIVE_LEAVES {
            return Err(Error::SizeCap {
                what: "leaves for exhaustive play",
                actual: leaves,
                limit: MAX_EXHAUSTIVE_LEAVES,
            });
        }
        Ok(())
    }

    fn next(t: &AndOrTree, var: usize, b: bool) -> AndOrTree {
        t.update(var, b).expect("non-empty").contract()
    }

    /// Final score from `t` when this player is the Prover.
    fn prover_value(&mut self, t: &AndOrTree) -> u32 {
        if t.is_empty() {
            return 0;
        }
        if let Some(&v) = self.prover_memo.get(t) {
            return v;
        }
        let v = t
            .leaf_vars()
            .into_iter()
            .map(|i| self.prover_query_value(t, i))
            .min()
            .expect("non-empty tree has a leaf");
        self.prover_memo.insert(t.clone(), v);
        v
    }

    fn prover_query_value(&mut self, t: &AndOrTree, i: usize) -> u32 {
        let v0 = self.prover_value(&Self::next(t, i, false));
        let v1 = self.prover_value(&Self::next(t, i, true));
        match self.opponent {
            Opponent::Paper => match delayer_move(t, i).expect("non-empty") {
                Decision::Answer(false) => v0,
                Decision::Answer(true) => v1,
                Decision::Defer => 1 + v0.min(v1),
            },
            Opponent::Adversarial => v0.max(v1).max(1 + v0.min(v1)),
        }
    }

    /// Final score from `t` when this player is the Delayer.
    fn delayer_value(&mut self, t: &AndOrTree) -> u32 {
        if t.is_empty() {
            return 0;
        }
        if let Some(&v) = self.delayer_memo.get(t) {
            return v;
        }
        let v = match self.opponent {
            Opponent::Paper => {
                let i = prover_move(t).expect("non-empty");
                self.delayer_options(t, i).into_iter().map(|(_, v)| v).max().expect("three options")
            }
            Opponent::Adversarial => t
                .leaf_vars()
                .into_iter()
                .map(|i| self.delayer_options(t, i).into_iter().map(|(_, v)| v).max().expect("three options"))
                .min()
                .expect("non-empty tree has a leaf"),
        };
        self.delayer_memo.insert(t.clone(), v);
        v
    }

    fn delayer_options(&mut self, t: &AndOrTree, i: usize) -> [(Decision, u32); 3] {
        let v0 = self.delayer_value(&Self::next(t, i, false));
        let v1 = self.delayer_value(&Self::next(t, i, true));
        let defer = match self.opponent {
            Opponent::Paper => 1 + v0,
            Opponent::Adversarial => 1 + v0.min(v1),
        };
        [
            (Decision::Answer(false), v0),
            (Decision::Answer(true), v1),
            (Decision::Defer, defer),
        ]
    }
}

impl ProverPolicy for Exhaustive {
    fn choose_var(&mut self, state: &GameState) -> Result<usize> {
        Self::check(&state.tree)?;
        let mut best: Option<(u32, usize)> = None;
        for i in state.tree.leaf_vars() {
            let v = self.prover_query_value(&state.tree, i);
            if best.map_or(true, |(b, _)| v < b) {
                best = Some((v, i));
            }
        }
        best.map(|(_, i)| i).ok_or(Error::EmptyTree)
    }

    fn choose_bit(&mut self, state: &GameState, var: usize) -> Result<bool> {
        Self::check(&state.tree)?;
        let v0 = self.prover_value(&Self::next(&state.tree, var, false));
        let v1 = self.prover_value(&Self::next(&state.tree, var, true));
        Ok(v1 < v0)
    }
}

impl DelayerPolicy for Exhaustive {
    fn respond(&mut self, state: &GameState, var: usize) -> Result<Decision> {
        Self::check(&state.tree)?;
        let opts = self.delayer_options(&state.tree, var);
        let mut best = opts[0];
        for o in &opts[1..] {
            if o.1 > best.1 {
                best = *o;
            }
        }
        Ok(best.0)
    }
}

/// Line-oriented terminal I/O shared by human players.
pub struct HumanIo {
    input: Box<dyn BufRead>,
    output: Box<dyn Write>,
}

impl HumanIo {
    pub fn new(input: Box<dyn BufRead>, output: Box<dyn Write>) -> Rc<RefCell<Self>> {
        Rc::new(RefCell::new(HumanIo { input, output }))
    }

    fn show(&mut self, state: &GameState) -> Result<()> {
        let m = state.tree.measures();
        writeln!(
            self.output,
            "tree: {}\nscore: {}  P: {}  S: {}",
            state.tree, state.score, m.p, m.s
        )?;
        Ok(())
    }

    /// Prompts until `parse` accepts a line.
    fn ask<T>(&mut self, prompt: &str, parse: impl Fn(&str) -> Result<T>) -> Result<T> {
        loop {
            write!(self.output, "{prompt}")?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(Error::InvalidParameter("input ended before the game did".into()));
            }
            match parse(&line) {
                Ok(v) => return Ok(v),
                Err(e) => writeln!(self.output, "{e}")?,
            }
        }
    }
}

pub fn parse_delayer_reply(line: &str) -> Result<Decision> {
    match line.trim() {
        "0" => Ok(Decision::Answer(false)),
        "1" => Ok(Decision::Answer(true)),
        "d" | "defer" => Ok(Decision::Defer),
        other => Err(Error::Malformed(format!("expected 0, 1 or defer, got {other:?}"))),
    }
}

pub fn parse_prover_bit(line: &str) -> Result<bool> {
    match line.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::Malformed(format!("expected 0 or 1, got {other:?}"))),
    }
}

/// Accepts `3` or `x3`.
pub fn parse_prover_var(line: &str) -> Result<usize> {
    let s = line.trim();
    let digits = s.strip_prefix('x').unwrap_or(s);
    digits
        .parse()
        .map_err(|_| Error::Malformed(format!("expected a variable index, got {s:?}")))
}

pub struct HumanProver(pub Rc<RefCell<HumanIo>>);

impl ProverPolicy for HumanProver {
    fn choose_var(&mut self, state: &GameState) -> Result<usize> {
        let mut io = self.0.borrow_mut();
        io.show(state)?;
        let n = state.assigned.len();
        io.ask("query variable: ", |line| {
            let v = parse_prover_var(line)?;
            if v < n && state.assigned[v].is_none() {
                Ok(v)
            } else {
                Err(Error::InvalidParameter(format!("x{v} is not an unassigned variable")))
            }
        })
    }

    fn choose_bit(&mut self, _: &GameState, var: usize) -> Result<bool> {
        self.0.borrow_mut().ask(&format!("delayer deferred; value for x{var}: "), parse_prover_bit)
    }
}

pub struct HumanDelayer(pub Rc<RefCell<HumanIo>>);

impl DelayerPolicy for HumanDelayer {
    fn respond(&mut self, state: &GameState, var: usize) -> Result<Decision> {
        let mut io = self.0.borrow_mut();
        io.show(state)?;
        io.ask(&format!("prover asks x{var} [0/1/defer]: "), parse_delayer_reply)
    }
}
