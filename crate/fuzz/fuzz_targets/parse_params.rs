#![no_main]
use libfuzzer_sys::fuzz_target;
use mdshift::families::{parse_count_map, CanonicalParams};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_count_map(text);
    if let Ok(p) = text.parse::<CanonicalParams>() {
        assert_eq!(p.to_string().parse::<CanonicalParams>().unwrap(), p);
        let _ = p.build();
    }
});
