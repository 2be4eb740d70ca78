#![no_main]

use dtq_core::WeightMap;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(w) = WeightMap::parse(text) else { return };
    if w.iter().all(|(_, x)| x.is_finite()) {
        assert_eq!(WeightMap::parse(&w.to_json()).expect("serialized weights parse"), w);
    }
});
