use std::cell::RefCell;
use std::io::{BufReader, IsTerminal};
use std::rc::Rc;

use anyhow::{bail, Context, Result};

use dtq_core::andor::{
    play, AndOrTree, Decision, DelayerPolicy, Exhaustive, HumanDelayer, HumanIo, HumanProver, Opponent, PaperDelayer,
    PaperProver, ProverPolicy, RandomDelayer, RandomProver,
};

use crate::{Outcome, Policy};

fn human_io(moves: Option<&str>) -> Result<Rc<RefCell<HumanIo>>> {
    let input: Box<dyn std::io::BufRead> = match moves {
        Some(path) => {
            let file = std::fs::File::open(path).with_context(|| format!("opening moves file {path}"))?;
            Box::new(BufReader::new(file))
        }
        None => {
            if !std::io::stdin().is_terminal() {
                bail!("the human policy needs a terminal on standard input; pass --moves FILE to script it");
            }
            Box::new(BufReader::new(std::io::stdin()))
        }
    };
    Ok(HumanIo::new(input, Box::new(std::io::stderr())))
}

fn opponent(other: Policy) -> Opponent {
    if other == Policy::Paper {
        Opponent::Paper
    } else {
        Opponent::Adversarial
    }
}

pub fn run(
    depth: usize,
    prover: Policy,
    delayer: Policy,
    seed: u64,
    trace: bool,
    moves: Option<&str>,
    json: bool,
) -> Result<Outcome> {
    let t = AndOrTree::complete(depth)?;
    let io = if prover == Policy::Human || delayer == Policy::Human {
        Some(human_io(moves)?)
    } else {
        None
    };
    let mut p: Box<dyn ProverPolicy> = match prover {
        Policy::Paper => Box::new(PaperProver),
        Policy::Random => Box::new(RandomProver::new(seed)),
        Policy::Human => Box::new(HumanProver(io.clone().expect("set above"))),
        Policy::Exhaustive => Box::new(Exhaustive::new(opponent(delayer))),
    };
    let mut d: Box<dyn DelayerPolicy> = match delayer {
        Policy::Paper => Box::new(PaperDelayer),
        Policy::Random => Box::new(RandomDelayer::new(seed)),
        Policy::Human => Box::new(HumanDelayer(io.clone().expect("set above"))),
        Policy::Exhaustive => Box::new(Exhaustive::new(opponent(prover))),
    };
    let tr = play(&t, p.as_mut(), d.as_mut())?;
    if json {
        println!("{}", serde_json::to_string_pretty(&tr)?);
    } else {
        println!("tree        {t}");
        println!("initial P   {}  S {}", tr.initial_p, tr.initial_s);
        if trace {
            for (k, r) in tr.rounds.iter().enumerate() {
                let answer = match r.decision {
                    Decision::Answer(b) => format!("answer {}", u8::from(b)),
                    Decision::Defer => format!("defer, prover sets {}", u8::from(r.bit)),
                };
                println!(
                    "round {:>3}: x{} {answer}; score {} P {} S {}; {}",
                    k + 1,
                    r.var,
                    r.score,
                    r.p,
                    r.s,
                    r.tree
                );
            }
        }
        println!("final score {}", tr.final_score);
        println!("value       {}", u8::from(tr.value));
    }
    Ok(Outcome::Pass)
}
