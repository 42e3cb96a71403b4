from .models import AUTO, Embedding
from .service import double_center, embed, reconstruction_error

__all__ = ["AUTO", "Embedding", "double_center", "embed", "reconstruction_error"]
