#![no_main]
use libfuzzer_sys::fuzz_target;
use thetafront::diagram::{parse, serialize};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = parse(text) else { return };
    let out = serialize(&d);
    let again = parse(&out).expect("serialized diagrams parse");
    assert_eq!(again, d);
    assert_eq!(serialize(&again), out);
});
