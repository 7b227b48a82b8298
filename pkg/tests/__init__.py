
"""Test suite for dc-fabric-cicd deployment scripts."""
