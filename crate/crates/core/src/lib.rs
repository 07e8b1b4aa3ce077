//! Descending, ascending and Morse-Smale regions of discrete gradient fields
//! on regular cell complexes.
//!
//! ```
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! use morse_regions::complex::build_cubical;
//! use morse_regions::morse::{extend_from_vertex_values, VertexValues};
//! use morse_regions::regions::morse_smale;
//!
//! let k = build_cubical(&[2, 2])?;
//! let vals = VertexValues::from_vertex_order(&k, &[0., 1., 0., 1., 5., 1., 0., 1., 0.]);
//! let v = extend_from_vertex_values(&k, &vals)?;
//! let d = morse_smale(&k, &v)?;
//! assert_eq!(d.descending.iter().filter(|r| r.dim == 2).count(), 1);
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod complex;
pub mod io;
pub mod morse;
pub mod pathfind;
pub mod regions;
