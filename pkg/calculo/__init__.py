"""Núcleo numérico: séries de partições, polinômios de Jack, oráculos e simulação do caos imaginário."""

__version__ = "1.0.0"
