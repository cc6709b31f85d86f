#![allow(dead_code)]

use std::path::PathBuf;

pub const VALID_PIPELINES: [&str; 20] = [
    "state(mu=0) | negativity",
    "state(mu=0.5) | negativity",
    "state(mu=0.25)",
    "state(mu=0.25) | dump",
    "state(mu=0.25) | accel(part=qubit, r=0.6) | filter(part=qutrit, Q=0.5, mode=postselect) | negativity",
    "state(mu=0)|accel(part=qubit,r=pi/4)|negativity",
    "state( mu = 0.1 ) | accel( part = qutrit , r = pi/4 ) | negativity",
    "state(mu=0.3) | accel(part=qubit, r=0) | negativity",
    "state(mu=0.5) | filter(part=qutrit, Q=0.81, mode=postselect) | negativity",
    "state(mu=0.5) | filter(part=qutrit, Q=0.81, mode=channel) | negativity",
    "state(mu=0.2) | accel(part=qutrit, r=0.3) | filter(part=qutrit, Q=0.9, mode=channel, pair=keep) | dump",
    "state(mu=0.2) | accel(part=qutrit, r=0.3) | filter(part=qutrit, Q=0.9, mode=postselect, pair=discard) | negativity",
    "state(mu=0.4) | filter(part=qubit, kappa=0.3) | negativity",
    "state(mu=0.4) | filter(part=qubit, kappa=0.3, mode=postselect) | negativity",
    "state(mu=0.05) | accel(part=qubit, r=0.2) | accel(part=qutrit, r=0.7) | negativity",
    "state(mu=0.05) | accel(part=qutrit, r=0.7) | accel(part=qubit, r=0.2)",
    "state(mu=1e-3) | filter(part=qubit, kappa=.5) | filter(part=qubit, kappa=0.5) | negativity",
    "state(mu=2.5E-1) | accel(part=qubit, r=7.5e-1) | negativity",
    "state(mu=0.125)\n|\taccel(part=qubit, r=pi/4)\n| filter(part=qutrit, mode=postselect, Q=0.125) | negativity()",
    "state(mu=0.5) | accel(part=qutrit, r=0.1) | filter(part=qubit, kappa=0.9) | filter(part=qutrit, Q=0.1, mode=channel) | dump",
];

/// Malformed inputs with the byte offset each error should point at.
pub const MALFORMED_PIPELINES: [(&str, usize); 10] = [
    ("", 0),
    ("state(mu=0.1", 12),
    ("state(mu 0.1)", 9),
    ("state(mu=0.1) | | negativity", 16),
    ("state(mu=0.7)", 9),
    ("negativity | state(mu=0)", 0),
    ("state(mu=0) | teleport", 14),
    ("state(mu=0) | accel(part=qubit, r=1.5)", 34),
    ("state(mu=0) | accel(part=qubit, r=0.1, q=2)", 39),
    ("state(mu=0) $ negativity", 12),
];

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_unruh-filter-lab"))
}
