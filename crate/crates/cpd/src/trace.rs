//! CSV export of Lloyd traces.

use std::io::{self, Write};

use cpd_core::lloyd::LloydTrace;

pub const HEADER: &str = "iteration,total,perimeter,transport,max_disp,cells";

pub fn write_trace<W: Write>(mut w: W, trace: &LloydTrace) -> io::Result<()> {
    writeln!(w, "{HEADER}")?;
    for (i, r) in trace.records.iter().enumerate() {
        writeln!(
            w,
            "{i},{},{},{},{},{}",
            r.energy.total, r.energy.perimeter, r.energy.transport, r.max_site_displacement, r.live_cells
        )?;
    }
    Ok(())
}
