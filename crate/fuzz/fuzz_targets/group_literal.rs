#![no_main]

use libfuzzer_sys::fuzz_target;
use ppdlab::FiniteAbelianGroup;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = s.parse::<FiniteAbelianGroup>() {
        let again: FiniteAbelianGroup = g.to_string().parse().expect("display round-trips");
        assert_eq!(again, g);
        assert_eq!(again.order(), g.moduli().iter().product::<usize>());
    }
});
