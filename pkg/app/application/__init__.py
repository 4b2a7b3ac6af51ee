"""Application layer - services and report DTOs."""
