//! Every runnable example must run to completion.

#[allow(dead_code)]
#[path = "../examples/forward_spectrum.rs"]
mod forward_spectrum;

#[allow(dead_code)]
#[path = "../examples/linear_nonuniqueness.rs"]
mod linear_nonuniqueness;

#[allow(dead_code)]
#[path = "../examples/bound_state_candidates.rs"]
mod bound_state_candidates;

#[allow(dead_code)]
#[path = "../examples/area_table_roundtrip.rs"]
mod area_table_roundtrip;

#[allow(dead_code)]
#[path = "../examples/marchenko_cross_check.rs"]
mod marchenko_cross_check;

#[allow(dead_code)]
#[path = "../examples/unknown_length.rs"]
mod unknown_length;

#[allow(dead_code)]
#[path = "../examples/outer_function.rs"]
mod outer_function;

#[allow(dead_code)]
#[path = "../examples/cli_usage.rs"]
mod cli_usage;

#[test]
fn forward_spectrum_runs() {
    forward_spectrum::run_example().unwrap();
}

#[test]
fn linear_nonuniqueness_runs() {
    linear_nonuniqueness::run_example().unwrap();
}

#[test]
fn bound_state_candidates_runs() {
    bound_state_candidates::run_example().unwrap();
}

#[test]
fn area_table_roundtrip_runs() {
    area_table_roundtrip::run_example().unwrap();
}

#[test]
fn marchenko_cross_check_runs() {
    marchenko_cross_check::run_example().unwrap();
}

#[test]
fn unknown_length_runs() {
    unknown_length::run_example().unwrap();
}

#[test]
fn outer_function_runs() {
    outer_function::run_example().unwrap();
}

#[test]
fn cli_usage_runs() {
    cli_usage::run_example().unwrap();
}
