"""Readers and writers for dmpfem files."""

from dmpfem.loaders.config_loader import load_settings, settings_from_mapping
from dmpfem.loaders.mesh_loader import load_mesh, read_mesh, save_mesh, write_mesh

__all__ = [
    "load_mesh",
    "load_settings",
    "read_mesh",
    "save_mesh",
    "settings_from_mapping",
    "write_mesh",
]
