#![no_main]
use libfuzzer_sys::fuzz_target;
use thetafront::diagram::{parse, serialize, FrontDiagram};

fuzz_target!(|data: &[u8]| {
    let Ok(d) = serde_json::from_slice::<FrontDiagram>(data) else {
        return;
    };
    if d.validate().is_err() {
        return;
    }
    // A valid decoded diagram must survive the text format.
    let back = parse(&serialize(&d)).expect("serialized diagrams parse");
    assert_eq!(back, d);
});
