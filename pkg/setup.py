# setup.py
from setuptools import setup, find_packages
from pathlib import Path
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text(encoding='utf-8')

setup(
    name='minimal_models',
    version='0.1.0',
    author='Mostafa Saad',
    author_email='mostafa.saad@ejust.edu.eg',
    description='Exact resultants, reduction types and global minimal models of endomorphisms of projective space over Q.',
    long_description=long_description,
    long_description_content_type='text/markdown',
    packages=find_packages(where='.', exclude=['tests']),
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Intended Audience :: Education',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.9', # math.lcm
    install_requires=[
        'numpy',
        'sympy>=1.14',
    ],
    extras_require={
        'test': ['pytest'], # Install with `pip install minimal_models[test]`
    },
    entry_points={
        'console_scripts': [
            'minmodel=minimal_models.main:main', # Command 'minmodel' runs minimal_models/main.py::main
        ],
    },
    # Map and adele fixtures ship with the package
    package_data={'minimal_models': ['fixtures/*.json']},
    include_package_data=True,
    keywords=['arithmetic dynamics', 'resultant', 'minimal model', 'lattice', 'hermite normal form', 'adeles'],
)
