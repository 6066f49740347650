"""Test suite for MeshAdminPrivAudit."""
