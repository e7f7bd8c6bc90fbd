import hashlib
import os
import redis
from typing import Optional

from wfcterrain.config import model_ttl_from_env


class ModelStore:
    """Redis storage layer for trained model files."""

    def __init__(self, host: str = None, port: int = None, db: int = 0, ttl: int = None):
        """
        Initialize Redis connection.

        Args:
            host: Redis host (defaults to REDIS_HOST env var or 'localhost')
            port: Redis port (defaults to REDIS_PORT env var or 6379)
            db: Redis database number (defaults to 0)
            ttl: Model lifetime in seconds (defaults to WFC_TERRAIN_MODEL_TTL or one day)
        """
        self.host = host or os.getenv('REDIS_HOST', 'localhost')
        self.port = port or int(os.getenv('REDIS_PORT', 6379))
        self.db = db
        self.ttl = ttl if ttl is not None else model_ttl_from_env()
        self.client = redis.Redis(
            host=self.host,
            port=self.port,
            db=self.db,
            decode_responses=True
        )

    @staticmethod
    def model_id(model_text: str) -> str:
        """Content address of a model file: first 16 hex digits of its SHA-256."""
        return hashlib.sha256(model_text.encode("utf-8")).hexdigest()[:16]

    def put_model(self, model_text: str) -> str:
        """
        Store a model file unless an identical one is already stored.

        Args:
            model_text: Model file contents

        Returns:
            The model id
        """
        model_id = self.model_id(model_text)
        if not self.exists(model_id):
            self.client.setex(f"model:{model_id}", self.ttl, model_text)
        return model_id

    def get_model_text(self, model_id: str) -> Optional[str]:
        """
        Retrieve a stored model file.

        Returns:
            The model text, or None if unknown or expired
        """
        return self.client.get(f"model:{model_id}")

    def exists(self, model_id: str) -> bool:
        return self.client.exists(f"model:{model_id}") > 0

    def ping(self) -> bool:
        """
        Test Redis connection.

        Returns:
            True if connection is successful, False otherwise
        """
        try:
            return self.client.ping()
        except redis.ConnectionError:
            return False


# Global instance
_store = None

def get_store() -> ModelStore:
    """Get or create the global ModelStore instance."""
    global _store
    if _store is None:
        _store = ModelStore()
    return _store
