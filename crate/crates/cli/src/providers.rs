//! Provider construction from configuration and environment.

use std::collections::BTreeMap;
use std::time::Duration;

use sumpipe_core::abstractor::{ChatClient, MockChatClient, RemoteChatClient};
use sumpipe_core::embed::{
    MaskedPredictor, MockMaskedPredictor, MockSentenceEmbedder, MockTokenEmbedder,
    RemoteSentenceEmbedder, SentenceEmbedder, TokenEmbedder, API_BASE_ENV, API_KEY_ENV,
};

use crate::config::PipelineConfig;
use crate::error::PipelineError;

pub struct ProviderSet {
    pub sentence: Box<dyn SentenceEmbedder>,
    pub token: Box<dyn TokenEmbedder>,
    pub masked: Box<dyn MaskedPredictor>,
    pub chat: Box<dyn ChatClient>,
}

impl ProviderSet {
    pub fn names(&self) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("sentence_embedder".into(), self.sentence.name().to_string()),
            ("token_embedder".into(), self.token.name().to_string()),
            ("masked_predictor".into(), self.masked.name().to_string()),
            ("chat_model".into(), self.chat.model().to_string()),
        ])
    }
}

fn credentials(config: &PipelineConfig) -> Result<(String, String), PipelineError> {
    let base = std::env::var(API_BASE_ENV)
        .ok()
        .or_else(|| config.providers.api_base.clone())
        .ok_or_else(|| {
            PipelineError::Config(format!(
                "remote providers need a base URL: set {API_BASE_ENV} or providers.api_base"
            ))
        })?;
    let key = std::env::var(API_KEY_ENV).map_err(|_| {
        PipelineError::Config(format!(
            "remote providers need credentials in {API_KEY_ENV}"
        ))
    })?;
    Ok((base, key))
}

/// Build the four providers. `force_mock` replaces every provider with its
/// deterministic offline mock regardless of configuration. Token embedding
/// and masked prediction have no remote wire protocol, so configuring
/// anything but "mock" for those is a configuration error.
pub fn build(config: &PipelineConfig, force_mock: bool) -> Result<ProviderSet, PipelineError> {
    if force_mock {
        return Ok(ProviderSet {
            sentence: Box::new(MockSentenceEmbedder),
            token: Box::new(MockTokenEmbedder::new()),
            masked: Box::new(MockMaskedPredictor),
            chat: Box::new(MockChatClient),
        });
    }

    let sentence: Box<dyn SentenceEmbedder> = if config.providers.sentence_embedder == "mock" {
        Box::new(MockSentenceEmbedder)
    } else {
        let (base, key) = credentials(config)?;
        Box::new(
            RemoteSentenceEmbedder::new(&base, &key, &config.providers.sentence_embedder)
                .with_batch_size(config.providers.embed_batch_size),
        )
    };

    if config.providers.token_embedder != "mock" {
        return Err(PipelineError::Config(
            "only the mock token embedder is available (no token-level wire API)".into(),
        ));
    }
    if config.providers.masked_predictor != "mock" {
        return Err(PipelineError::Config(
            "only the mock masked predictor is available (no masked-prediction wire API)".into(),
        ));
    }

    let chat: Box<dyn ChatClient> = if config.providers.chat == "mock" {
        Box::new(MockChatClient)
    } else {
        let (base, key) = credentials(config)?;
        Box::new(
            RemoteChatClient::new(&base, &key, &config.providers.chat)
                .with_temperature(config.abstraction.temperature)
                .with_timeout(Duration::from_secs(config.abstraction.timeout_secs))
                .with_retries(config.abstraction.max_retries, Duration::from_millis(500)),
        )
    };

    Ok(ProviderSet {
        sentence,
        token: Box::new(MockTokenEmbedder::new()),
        masked: Box::new(MockMaskedPredictor),
        chat,
    })
}
