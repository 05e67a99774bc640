//! Benchmark circuits shipped with the crate.

use crate::circuit::Circuit;
use crate::qasm::parse_qasm;

pub struct Benchmark {
    pub name: &'static str,
    pub qasm: &'static str,
}

pub const BENCHMARKS: [Benchmark; 8] = [
    Benchmark { name: "xcx7", qasm: include_str!("../benchmarks/xcx7.qasm") },
    Benchmark { name: "xcx37", qasm: include_str!("../benchmarks/xcx37.qasm") },
    Benchmark { name: "toff_nc3", qasm: include_str!("../benchmarks/toff_nc3.qasm") },
    Benchmark { name: "toff_nc4", qasm: include_str!("../benchmarks/toff_nc4.qasm") },
    Benchmark { name: "toff_nc5", qasm: include_str!("../benchmarks/toff_nc5.qasm") },
    Benchmark { name: "toff_barenco3", qasm: include_str!("../benchmarks/toff_barenco3.qasm") },
    Benchmark { name: "mod5_4", qasm: include_str!("../benchmarks/mod5_4.qasm") },
    Benchmark { name: "vbe_adder3", qasm: include_str!("../benchmarks/vbe_adder3.qasm") },
];

impl Benchmark {
    pub fn circuit(&self) -> Circuit {
        parse_qasm(self.qasm).expect("shipped benchmark parses")
    }
}

pub fn benchmark(name: &str) -> Option<Circuit> {
    BENCHMARKS.iter().find(|b| b.name == name).map(Benchmark::circuit)
}
