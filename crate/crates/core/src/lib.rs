pub mod arc;
pub mod closure;
pub mod config;
pub mod diagram;
pub mod error;
pub mod hom;
pub mod nc;
pub mod mutation;
pub mod enumerate;
pub mod graph;
pub mod io;
pub mod render;

pub use arc::{Arc, Vertex, Weight};
pub use config::{classify_configuration, ClassValue, ConfigClass};
pub use diagram::{Boundary, Diagram, Mode};
pub use error::{Error, Result};
pub use io::{parse_diagram, serialize_diagram};
