# __main__.py
"""Allows running with python -m minimal_models"""
from .main import main

if __name__ == "__main__":
    main()
