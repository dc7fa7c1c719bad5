# Utils package
from src.utils.sample_data import generate_sample_model, generate_sample_models, generate_transitions

__all__ = ["generate_sample_model", "generate_sample_models", "generate_transitions"]
