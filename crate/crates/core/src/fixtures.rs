//! Reference topologies used in documentation, tests and benchmarks.

use crate::circuit::Topology;

/// Buck converter: `VIN - Sa0`, `Sa0 - Sb1 - L2`, `L2 - VOUT`, `Sb1 - GND`.
pub fn buck() -> Topology {
    parse("VIN VOUT GND Sa Sb L : VIN Sa0.1 ; Sa0.2 Sb1.1 L2.1 ; L2.2 VOUT ; Sb1.2 GND")
}

/// Boost converter over the same device multiset as [`buck`].
pub fn boost() -> Topology {
    parse("VIN VOUT GND Sa Sb L : VIN L2.1 ; L2.2 Sa0.1 Sb1.1 ; Sa0.2 GND ; Sb1.2 VOUT")
}

/// CMOS inverter. The PMOS source and body form a net of their own, standing
/// in for the supply rail since the port set is fixed.
pub fn inverter() -> Topology {
    parse(
        "VIN VOUT GND NMOS PMOS : VIN NMOS0.G PMOS1.G ; VOUT NMOS0.D PMOS1.D ; \
         GND NMOS0.S NMOS0.B ; PMOS1.S PMOS1.B",
    )
}

fn parse(s: &str) -> Topology {
    s.parse().expect("fixture topology is well formed")
}
