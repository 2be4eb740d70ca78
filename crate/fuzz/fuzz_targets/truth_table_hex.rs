#![no_main]

use dtq_core::rank::{func_rank, game_value};
use dtq_core::TruthTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = usize::from(n % 8);
    let Ok(hex) = std::str::from_utf8(rest) else { return };
    let Ok(f) = TruthTable::from_hex(n, hex) else { return };
    assert_eq!(TruthTable::from_hex(n, &f.to_hex()).expect("own hex parses"), f);
    if n <= 4 {
        assert_eq!(func_rank(&f).unwrap(), game_value(&f).unwrap());
    }
});
