//! Logic toolkit for the gap between the material conditional (`->`) and the
//! law-like strict conditional (`=>`).
//!
//! The pieces, bottom to top:
//!
//! * [`formula`] — the AST, signatures, rendering, and `erase_strict` (the
//!   fixed-world reading of a law);
//! * [`parser`] — the ASCII surface syntax;
//! * [`material`] — classical truth at one world: valuations, finite
//!   structures, and exhaustive enumeration of both;
//! * [`worlds`] — the strict reading: lifting atoms onto world variables,
//!   universal closure of asserted sentences, Kripke models with universal
//!   accessibility, and a two-sorted encoding that lets the classical
//!   evaluator cross-check the Kripke evaluator;
//! * [`equiv`] — bounded equivalence checking with canonical minimal
//!   countermodels, and the law-survival catalog.
//!
//! The crate is `no_std` (with `alloc`) and has no runtime dependencies.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod equiv;
pub mod formula;
pub mod material;
pub mod parser;
pub mod worlds;

pub use equiv::{
    equiv_material_fo, equiv_material_prop, equiv_strict, law_catalog, law_survival,
    law_survival_catalog, Bounds, Countermodel, EquivError, Law, LawReport, SearchSpace,
    SearchStats, StrictMode, Verdict,
};
pub use formula::{Formula, FormulaError, Signature, SignatureError, Var};
pub use material::{
    enumerate_structures, enumerate_valuations, eval_fo, eval_prop, CapExceeded, EnumCaps,
    EvalError, ModelError, PredTable, Structure, StructureSpace, Valuation, ValuationSpace,
};
pub use parser::{parse, ParseError, ParseResult};
pub use worlds::{
    assert_closure, encode_model, encoded_signature, eval_strict_assert, eval_strict_at,
    eval_via_encoding, has_atom_outside_strict, lift, lifted_sentence, relativize, KripkeModel,
    LiftedFormula, WorldVar, WorldVarGen,
};
