//! Convolution operads, twisting morphisms, twisted composite products, bar and cobar
//! constructions, and Koszulness certificates in bounded arity.

mod barcobar;
mod certificate;
mod convolution;
mod twisted;

pub use barcobar::{
    bar, cobar, compare_homology, counit_comparison, koszul_inclusion_comparison, operad_complex, BarConstruction,
    CobarConstruction, HomologyComparison,
};
pub use certificate::{koszulness_certificate, ArityCertificate, KoszulnessReport};
pub use convolution::{koszul_morphism, Convolution, ConvolutionElement, TwistingMorphism};
pub use twisted::{twisted_composite, Side, TwistedComposite};

#[cfg(test)]
mod tests;
