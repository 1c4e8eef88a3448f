import json
from pathlib import Path

from rest_framework import serializers
from rest_framework.settings import api_settings

from sepbias.exceptions import SchemaError


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = [key for key in data if key not in self.fields]
            if unknown:
                raise serializers.ValidationError({unknown[0]: ['Unexpected field.']})
        return super().to_internal_value(data)


class DocumentSerializer(StrictSerializer):
    """JSON document holding one domain object.

    Subclasses build the object in create() and write it in to_representation().
    """

    @classmethod
    def parse(cls, data):
        serializer = cls(data=data)
        if not serializer.is_valid():
            column, message = first_error(serializer.errors)
            raise SchemaError(f'{cls.__name__}: {message}', column=column)
        return serializer.save()

    @classmethod
    def load(cls, path):
        try:
            data = json.loads(Path(path).read_text(encoding='utf-8'))
        except json.JSONDecodeError as exc:
            raise SchemaError(f'{path}: invalid JSON: {exc.msg}', line=exc.lineno) from exc
        return cls.parse(data)

    @classmethod
    def dump(cls, instance, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_json(cls(instance).data), encoding='utf-8', newline='\n')
        return path


class BatchSizeField(serializers.Field):
    default_error_messages = {
        'invalid': "Expected a positive integer or 'full'.",
    }

    def to_internal_value(self, data):
        if data == 'full':
            return data
        if isinstance(data, bool) or not isinstance(data, int) or data < 1:
            self.fail('invalid')
        return data

    def to_representation(self, value):
        return value


def first_error(errors, path: tuple[str, ...] = ()) -> tuple[str | None, str]:
    """Dotted location and message of the first error DRF reported."""
    for key, value in errors.items():
        location = path if key == api_settings.NON_FIELD_ERRORS_KEY else (*path, str(key))
        if isinstance(value, dict):
            return first_error(value, location)
        if isinstance(value, list) and value:
            if isinstance(value[0], dict):
                return first_error(value[0], location)
            return '.'.join(location) or None, str(value[0])
    return '.'.join(path) or None, 'invalid document'


def dump_json(document) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + '\n'
