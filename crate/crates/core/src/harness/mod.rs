//! Main-inequality certificates and verification campaigns.

mod campaigns;
mod certificate;

pub use campaigns::{
    run_campaign, CampaignConfig, CampaignError, Case, Report, CAMPAIGNS, REPORT_SCHEMA,
};
pub use certificate::{
    main_inequality, main_inequality_asymptotic, main_inequality_exact, verify_certificate,
    CertError, Certificate, Condition, ExhaustiveRange, KRecord, LargeK, MainIneqConfig, Mode,
    RecordKind, Relation, TailClosure, Verification, CERTIFICATE_SCHEMA, EXACT_MAX_DEGREE,
    EXHAUSTIVE_LIMIT,
};

#[cfg(test)]
mod tests;
