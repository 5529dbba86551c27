#![no_main]
use libfuzzer_sys::fuzz_target;
use thetafront::diagram::{parse, Mode};
use thetafront::invariants::{classify_r, invariant_vector, knot_invariants};
use thetafront::render::{render_front, Format};
use thetafront::ribbon::push_off;

// Everything downstream of validation must accept any valid diagram.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = parse(text) else { return };
    if d.events.len() > 64 || d.validate().is_err() {
        return;
    }
    match d.mode {
        Mode::Theta => {
            let v = invariant_vector(&d).expect("valid theta diagrams have invariants");
            assert_eq!(v.r, v.rot[0] - v.rot[1] + v.rot[2]);
            let _ = classify_r(&d);
        }
        _ => {
            knot_invariants(&d).expect("valid diagrams have invariants");
        }
    }
    let l = push_off(&d).expect("valid diagrams have a push-off");
    l.analyze().expect("push-offs are closed and oriented");
    render_front(&d, Format::Svg).expect("valid diagrams render");
    render_front(&d, Format::Ascii).expect("valid diagrams render");
});
