import logging

from wfcterrain.models.patterns import Model
from wfcterrain.storage.model_io import load_model
from wfcterrain.storage.redis_store import get_store

logger = logging.getLogger(__name__)


def register_model(model_text: str) -> tuple[str, Model]:
    """
    Validate a model file and store it under its content address.
    Uploading identical text again returns the existing id.
    """
    model = load_model(model_text)
    model_id = get_store().put_model(model_text)
    logger.info("registered model %s (%d patterns)", model_id, len(model))
    return model_id, model


def lookup_model(model_id: str) -> Model | None:
    """Parse a stored model, or None if it is unknown or expired."""
    text = get_store().get_model_text(model_id)
    if text is None:
        return None
    return load_model(text)
