//! Parameter tables, event files and report rendering.

mod events;
mod params;
mod report;

pub use events::{read_events, write_events, EventReader, EventWriter, EVENT_HEADER};
pub use params::{
    bundled_parameters, emit_table, load_parameters, parse_parameters, ParameterRow,
    ParameterTable, ReferenceRow, BUNDLED_PARAMETERS, PARAMETER_HEADER, REFERENCE_VALUES,
};
pub use report::{format_sig, Cell, Format, Report, REPORT_DIGITS};
