"""Service layer: pydantic models, operation handlers, and the FastAPI app."""
