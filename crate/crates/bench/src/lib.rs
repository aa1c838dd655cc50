//! Fixtures shared by the criterion benches.

use hyperc2pf::{canonical_script, AngleTuple, CircuitScript, HyperState, InputSpec};

/// Canonical circuit and a generic product input on it.
pub fn canonical_fixture() -> (CircuitScript, HyperState) {
    let script = canonical_script();
    let angles = AngleTuple::from_array([0.3, 1.1, 2.0, 0.7, 2.9, 1.6]);
    let input = script
        .input_state(&InputSpec::from_angles(&angles))
        .expect("canonical input");
    (script, input)
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixture_is_normalized() {
        let (_, s) = super::canonical_fixture();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
