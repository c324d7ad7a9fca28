#![no_main]

use libfuzzer_sys::fuzz_target;
use ppdlab::io::{format_generators, parse_generators};
use ppdlab::FiniteAbelianGroup;

// input is `<group literal>|<generators>`
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Some((lit, gens)) = s.split_once('|') else {
        return;
    };
    let Ok(g) = lit.parse::<FiniteAbelianGroup>() else {
        return;
    };
    if g.order() > 4096 {
        return;
    }
    let Ok(h) = parse_generators(gens, &g) else {
        return;
    };
    assert_eq!(g.order() % h.order(), 0);
    let json = serde_json::to_string(&format_generators(&h)).unwrap();
    let again = parse_generators(&json, &g).expect("formatted generators parse");
    assert_eq!(again.elements(), h.elements());
});
