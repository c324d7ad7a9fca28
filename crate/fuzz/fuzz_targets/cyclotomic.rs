#![no_main]

use libfuzzer_sys::fuzz_target;
use ppdlab::io::parse_cyclotomic;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(z) = parse_cyclotomic(s) {
        let text = z.to_exact_string();
        let again = parse_cyclotomic(&text).expect("exact strings round-trip");
        assert_eq!(again, z, "{s:?} printed as {text:?}");
    }
});
