#![no_main]

use dtq_core::andor::{
    parse_delayer_reply, parse_prover_bit, parse_prover_var, play, AndOrTree, HumanDelayer, HumanIo, HumanProver,
    PaperDelayer, PaperProver,
};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(line) = std::str::from_utf8(data) {
        let _ = parse_prover_var(line);
        let _ = parse_prover_bit(line);
        let _ = parse_delayer_reply(line);
    }
    let t = AndOrTree::complete(2).unwrap();
    let script = data.to_vec();
    let io = HumanIo::new(Box::new(std::io::Cursor::new(script.clone())), Box::new(std::io::sink()));
    if let Ok(tr) = play(&t, &mut HumanProver(io), &mut PaperDelayer) {
        assert_eq!(tr.final_score, 2);
    }
    let io = HumanIo::new(Box::new(std::io::Cursor::new(script)), Box::new(std::io::sink()));
    if let Ok(tr) = play(&t, &mut PaperProver, &mut HumanDelayer(io)) {
        assert!(tr.final_score <= 2);
    }
});
