#![no_main]

use dtq_core::DTree;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(t) = DTree::parse(text) else { return };
    assert_eq!(t.size(), 2 * t.num_leaves() - 1);
    assert!(t.depth() <= t.n());
    let back = DTree::parse(&t.to_json()).expect("serialized trees parse");
    assert_eq!(back, t);
});
