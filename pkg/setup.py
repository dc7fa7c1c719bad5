from setuptools import setup, find_packages

setup(
    name="modlp",
    version="1.0.0",
    description="Module system over logic programming: domains, models, transforms and transform systems",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "src.data": ["corpus/*.4ml", "corpus/README.md"],
    },
    install_requires=[
        "pandas>=1.5.0",
        "numpy>=1.21.0",
    ],
    python_requires=">=3.9",
    entry_points={
        "console_scripts": [
            "modlp=src.main:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Software Development :: Compilers",
    ],
)
